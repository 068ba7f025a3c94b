#pragma once

#include "bs1d/warped.hpp"

#include <limits>
#include <vector>

namespace bs1d {

// Generalized geodesics on T_d of the kinds the construction uses: constants,
// finite segments, and rays toward omega. c is locally constant off
// [c_minus, c_plus] and unit-speed isometric on it.
enum class GeodesicKind { Constant, Segment, RayToOmega };

struct GeneralizedGeodesic {
  GeodesicKind kind = GeodesicKind::Constant;
  TreePoint anchor;   // value before c_minus
  TreePoint target;   // segment endpoint (segments only)
  double c_minus = 0.0;
  double c_plus = 0.0;  // +infinity for rays
};

struct HorizontalFlowPoint {
  GeneralizedGeodesic c;
  double w = 0.0;
};

constexpr double kPlusInfinity = std::numeric_limits<double>::infinity();

// Largest order of a finite subgroup of Gamma (torsion free).
constexpr long kGammaTorsionBound = 1;

GeneralizedGeodesic constant_geodesic(const TreePoint& z, double t0 = 0.0);
GeneralizedGeodesic ray_to_omega(const TreePoint& z, double t0 = 0.0);
GeneralizedGeodesic segment_geodesic(const TreePoint& a, const TreePoint& b,
                                     double t0, long d);

TreePoint evaluate(const GeneralizedGeodesic& c, double t, long d);
GeneralizedGeodesic flow(const GeneralizedGeodesic& c, double tau);

// Psi(z, w) = (c_z, w) with c_z constant z on (-inf, 0] and isometric onto
// [z, omega) afterwards; Psi_tau = Phi_tau . Psi.
HorizontalFlowPoint psi_embed(const SpacePoint& p);
GeneralizedGeodesic psi_ray(const TreePoint& z, double tau = 0.0);

GeneralizedGeodesic group_act(const AffineElement& g, const GeneralizedGeodesic& c, long d);
GeneralizedGeodesic group_act(const GammaElement& g, const GeneralizedGeodesic& c, long d);
HorizontalFlowPoint group_act(const GammaElement& g, const HorizontalFlowPoint& h, long d);

// Piece of the piecewise-linear distance profile: d(t) = a + b*t on [t0, t1].
struct ProfilePiece {
  double t0, t1, a, b;
};

// Exact piecewise-linear profile of t -> d_T(c1(t), c2(t)); slopes are
// integers in [-2, 2].
std::vector<ProfilePiece> fs_profile(const GeneralizedGeodesic& c1,
                                     const GeneralizedGeodesic& c2, long d);

// Integral of (a + b t) e^{-|t|} / 2 over [t0, t1], in closed form.
double integrate_against_kernel(const std::vector<ProfilePiece>& pieces);

// d_FS on FS(T_d): integral of d_T(c1(t), c2(t)) e^{-|t|}/2, exactly.
double fs_tree_distance(const GeneralizedGeodesic& c1, const GeneralizedGeodesic& c2,
                        long d);

// Metric HFS(T_d x R) inherits from FS(T_d x R): adaptive quadrature of the
// warped distance along the pair, with a certified exponential tail bound.
double hfs_distance(const HorizontalFlowPoint& h1, const HorizontalFlowPoint& h2,
                    long d, double tol = 1e-9);

struct InqReport {
  double base = 0, flowed = 0, lower = 0, upper = 0;
  bool pass = false;
};
// Checks e^{-|tau|} d_FS(c1,c2) <= d_FS(Phi_tau c1, Phi_tau c2) <= e^{|tau|} d_FS(c1,c2).
InqReport lemma_inq_check(const GeneralizedGeodesic& c1, const GeneralizedGeodesic& c2,
                          double tau, long d, double tol = 1e-9);

struct LparSample {
  long n = 0;
  double space_dist = 0, hfs_dist = 0;
  bool pass = false;
};
struct LparReport {
  double T = 0;
  long n_bar = 0;
  std::vector<LparSample> samples;
  bool pass = false;
};
// Computes N-bar from the closed-form fiber distances so that for n > N-bar
// the pair P_n = (z0, w1/n), Q_n = (z0, w2/n) has d_X < eps/4 and
// d_HFS(Psi(P_n), Psi(Q_n)) <= eps; verifies on sampled n.
LparReport lemma_lpar_bound(double epsilon, double D, long d);

struct Case2Sample {
  int subcase = 1;
  double dhat = 0, d1 = 0, d2 = 0;
  double measured = 0, bound = 0, half_delta = 0;
  bool pass = false;
};
struct Case2Report {
  double tau = 0, epsilon = 0;
  std::vector<Case2Sample> samples;
  bool pass = false;
};
// Quantitative estimate chain: tau = ln n - ln delta + n; subcase-1
// configurations satisfy d_FS <= (1/2) dhat e^{-tau} < delta/2, subcase-2
// ones d_FS <= (n/2) e^{-(tau - d1)} < delta/2.
Case2Report case2_estimate_check(long n, double delta, long d);

struct PeriodicReport {
  long count = 0;
  bool verified = false;
};
// Number of horizontal periodic curves of period m: solutions of
// d^m x = x (mod 1), exactly d^m - 1, certified by exhaustive enumeration.
PeriodicReport count_periodic(long m, long d);

}  // namespace bs1d
