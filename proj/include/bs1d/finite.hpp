#pragma once

#include "bs1d/group.hpp"

#include <string>
#include <vector>

namespace bs1d {

// Orders attached to d in the unit groups U(Z_q), U(Z_{q^s}):
// t_s = m_s q^{k_s} with gcd(m_s, q) = 1; m_s = t_1 always.
struct OrderData {
  long t1 = 0, ts = 0, ks = 0, ms = 0;
};
OrderData multiplicative_order(long d, long q, int s);

// Data of U_{q^s} = <-1, p> inside the cyclic group U(Z_{q^s}): its order
// t'_s (= t_s or 2 t_s), the order t'_1 of its generator mod q, and a
// generator.
struct ExtendedUnitData {
  long t1p = 0, tsp = 0, generator = 0;
};
ExtendedUnitData extended_unit_data(long p, long q, int s);

enum class SpecVariant { Plain, Extended };

// Parameters of the finite quotient Z_{q^s} x|_alpha Z_t, alpha =
// multiplication by `unit` (d mod q^s, or the generator of U_{q^s} in the
// extended variant), t the order of `unit` mod q^s.
struct GroupSpec {
  long d = 2;
  long q = 5;
  int s = 1;
  SpecVariant variant = SpecVariant::Plain;
  // Derived:
  long qs = 5;
  long unit = 2;
  long t = 4;
  long t1_acting = 4;  // order of `unit` mod q
  long ks = 0;         // v_q(t)
  OrderData ord;
  std::vector<long> unit_pow;  // unit^j mod qs, j in [0, t)
};
GroupSpec make_spec(long d, long q, int s, SpecVariant variant = SpecVariant::Plain);
// Theorem-grade preconditions q > |d| + 1 (and the k_s >= 1 relaxation of
// s > q); when false, classification runs in audit mode.
bool classification_preconditions(const GroupSpec& spec);

struct FiniteSemidirectElement {
  long a = 0, b = 0;

  bool operator==(const FiniteSemidirectElement& o) const {
    return a == o.a && b == o.b;
  }
  bool operator<(const FiniteSemidirectElement& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
};

FiniteSemidirectElement fsd_identity();
FiniteSemidirectElement fsd_mul(const FiniteSemidirectElement& x,
                                const FiniteSemidirectElement& y, const GroupSpec& spec);
FiniteSemidirectElement fsd_inv(const FiniteSemidirectElement& x, const GroupSpec& spec);
FiniteSemidirectElement fsd_pow(const FiniteSemidirectElement& x, long n,
                                const GroupSpec& spec);
// t x t^{-1}
FiniteSemidirectElement fsd_conj(const FiniteSemidirectElement& t,
                                 const FiniteSemidirectElement& x, const GroupSpec& spec);
long fsd_order(const FiniteSemidirectElement& x, const GroupSpec& spec);

// Lemma-conj conjugator: (x, 0) with (x,0)(a,b)(x,0)^{-1} = (0, b); requires
// t_1 not dividing b.
FiniteSemidirectElement conjugate_to_pure_rotation(const FiniteSemidirectElement& e,
                                                   const GroupSpec& spec);

struct Subgroup {
  std::vector<FiniteSemidirectElement> elements;  // sorted; empty if not materialized
  std::vector<FiniteSemidirectElement> generators;
  long order = 1;
  bool materialized = false;
};

Subgroup subgroup_closure(const std::vector<FiniteSemidirectElement>& gens,
                          const GroupSpec& spec);

enum class SubgroupStrategy { Brute, Structured };

// One (H cap N, pi(H), twist) family of the metacyclic parametrization:
// subgroups <(q^i, 0), (c, bbar)> for c in {twist_step * j, j < twist_count}.
struct StructuredFamily {
  long i = 0;
  long bbar = 0;
  long m = 1;  // |pi(H)|
  long twist_step = 1;
  long twist_count = 1;
  long order = 1;
};
std::vector<StructuredFamily> structured_families(const GroupSpec& spec);

// Complete duplicate-free subgroup list. Brute requires |G| <= 10^4 and uses
// closure joins; Structured expands the parametrized families.
std::vector<Subgroup> enumerate_subgroups(const GroupSpec& spec, SubgroupStrategy strategy);

struct HyperElementaryWitness {
  bool value = false;
  std::vector<FiniteSemidirectElement> cyclic;  // the normal cyclic subgroup C
  long p = 0;                                   // H/C is a p-group
};
HyperElementaryWitness is_hyper_elementary(const Subgroup& h, const GroupSpec& spec);

enum class SubgroupType { Type1 = 1, Type2 = 2, Type3 = 3 };

struct ClassificationResult {
  bool ok = false;
  SubgroupType type = SubgroupType::Type3;
  FiniteSemidirectElement conjugator;
  long index = 0;  // t_1 / q^{k_s} / q^s per type
  bool verified = false;
  std::string note;
};
// Theorem taxonomy: conjugates H into type 1 (Z_{q^s} x| Z_{q^{k_s}}),
// type 2 (Z_{q^s} x| Z_{t_1}) or type 3 ({0} x| Z_{t_s}), with the
// containment verified element-wise.
ClassificationResult classify(const Subgroup& h, const GroupSpec& spec);

struct CorollaryC2Row {
  long order = 0;
  int type = 0;
  long index = 0;
  bool case1 = false, case2 = false, ok = false;
};
struct CorollaryC2Report {
  bool audit = false;
  bool pass = false;
  long hyper_count = 0;
  std::vector<CorollaryC2Row> rows;
};
CorollaryC2Report corollary_c2_check(long n, const GroupSpec& spec);

struct Case1Report {
  long delta_k = 0;
  long displacement = 0;
  bool bound_ok = false;
  double l1 = 0;
  bool l1_ok = true;
};
// |k1 - k2| <= d_T(h^{-1} g P_0, P_0) exactly; with edge length m = 4 n^2 the
// l^1 image distance stays below 1/n whenever |k1 - k2| < n.
Case1Report case1_contraction_check(const GammaElement& g, const GammaElement& h,
                                    long d, long n);

// M (x,k) M^{-1}-style identity for M = diag(q^s, 1), exactly, plus the same
// identity on sampled tree vertices and real fiber points.
bool fqs_semi_equivariance_check(const GammaElement& g, long qs, long d);

FiniteSemidirectElement delta_n(const GammaElement& g, const GroupSpec& spec);
// Extended-variant quotient of Aff(Z[1/p]); the unit maps to its discrete log
// base spec.unit.
FiniteSemidirectElement delta_affine(const AffineElement& g, const GroupSpec& spec);

bool hbar_membership(const GammaElement& g, const Subgroup& h, const GroupSpec& spec);

long mod_pow(long base, long exp, long mod);
long mod_inv(long a, long mod);

}  // namespace bs1d
