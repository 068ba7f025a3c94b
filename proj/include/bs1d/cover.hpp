#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bs1d {

// Finite sampled metric space; the metric is pinned behind a closure so tree
// and warped samples plug in uniformly.
struct SampledSpace {
  int size = 0;
  std::function<double(int, int)> metric;
  std::vector<std::string> labels;
};

struct CoverMember {
  std::string id;
  std::vector<int> points;                 // sorted point indices
  std::vector<double> dist_to_complement;  // parallel to points
};

struct Cover {
  std::vector<CoverMember> members;
};

// Builds a cover from raw member point sets, computing the sampled
// distance-to-complement values.
Cover make_cover(const SampledSpace& space,
                 const std::vector<std::pair<std::string, std::vector<int>>>& members);

// Greatest N with N+1 members meeting: max over points of
// (#containing members) - 1.
long cover_dimension(const SampledSpace& space, const Cover& cover);

// Every sampled beta-ball lies in some member.
bool lebesgue_check(const SampledSpace& space, const Cover& cover, double beta);

struct BarycentricPoint {
  std::map<std::string, double> weights;
};

// Partition-of-unity nerve map: weight(U) proportional to d(x, X \ U).
BarycentricPoint canonical_map(const Cover& cover, int point);
double l1_distance(const BarycentricPoint& x, const BarycentricPoint& y);

struct LipschitzReport {
  double beta = 0;
  long dimension = 0;
  double threshold = 0;     // beta / (4N)
  double coefficient = 0;   // 16 N^2 / beta
  long pairs_checked = 0;
  double max_ratio = 0;     // l1 image distance over coefficient * d(x,y)
  bool pass = false;
};
// For all sampled pairs with d(x,y) <= beta/(4N): l1(rho x, rho y) <=
// (16 N^2 / beta) d(x,y).
LipschitzReport lipschitz_check(const SampledSpace& space, const Cover& cover,
                                double beta);

// Finite F-cover fixture: a permutation action on the points and a declared
// family of admissible stabilizers (as sets of group element indices).
struct FCoverFixture {
  int npoints = 0;
  std::vector<std::vector<int>> group;  // permutations; group[0] = identity
  std::vector<std::vector<int>> member_sets;
  std::vector<std::vector<int>> allowed_stabilizers;
};

struct FCoverReport {
  bool disjoint_or_equal = false;
  bool closed_under_action = false;
  bool stabilizers_ok = false;
  bool pass = false;
};
FCoverReport f_cover_axioms(const FCoverFixture& fixture);

// [lo, hi] sampled at the given mesh.
SampledSpace interval_space(double lo, double hi, double step);
// The 10-member cover (i-1, i+2), i = 0..9, of [0, 10].
Cover interval_cover_fixture(const SampledSpace& space);

// JSON fixture: {"metric": "interval"|"tree-ball"|"warped-sample",
//                "d": 2, "points": [...], "members": [{"id", "pointIds"}]}.
struct LoadedFixture {
  SampledSpace space;
  Cover cover;
};
LoadedFixture load_cover_fixture_json(const std::string& json_text);

}  // namespace bs1d
