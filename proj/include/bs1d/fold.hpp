#pragma once

#include "bs1d/tree.hpp"

namespace bs1d {

// Quotient of a finite ball of T_p under the equivariant closure of the
// Stallings fold seed. Cells are ball vertices plus edge midpoints; classes
// carry the (constant) level of their members.
struct FoldQuotient {
  BallGraph ball;
  std::vector<int> cell_class;  // per cell: vertices then edge midpoints
  long n_vertices = 0;
  long n_edges = 0;
  // Trimmed quotient graph (inner region only):
  std::vector<long> node_level;           // per quotient node
  std::vector<std::pair<int, int>> edges;  // quotient node pairs
  int center_node = 0;
  bool is_tree = false;
};

struct FiniteTree {
  std::vector<long> levels;
  std::vector<std::vector<int>> adj;
  int center = 0;
};

// Default closure generator set: level shifts by the fold step, one unit
// coprime to p, and translations (1, b) with b in p^{-R} Z, both signs.
std::vector<AffineElement> default_fold_generators(long p, long radius);

// One fold pass: identify the seed edge pair phi: P_0 P_{step} ->
// beta(P_0) P_{step} with beta = (1, p^{-step}), close under the generators,
// and return the quotient trimmed to the inner ball of radius R - 2.
// Iterations > 1 replays the construction with step 2^k for the k-th pass.
FoldQuotient fold_step(long p, long radius, const std::vector<AffineElement>& generators,
                       int iterations = 1);

// Removes degree-2 quotient nodes, merging their edges.
FiniteTree suppress_degree2(const FoldQuotient& q);

struct FoldReport {
  bool quotient_is_tree = false;
  bool valence_ok = false;
  bool isomorphic = false;
  long inner_radius = 0;     // compared ball radius in the folded tree
  long expected_valence = 0;  // p^{2^iterations} + 1
  bool pass = false;
};

// Fold + suppression certified against the directly built T_{p^2} ball
// (or T_{p^{2^iterations}} for iterated folds).
FoldReport verify_fold(long p, long radius, int iterations = 1);

struct DiagonalReport {
  long valence = 0;
  long tuple_vertices = 0;
  long direct_vertices = 0;
  bool isomorphic = false;
  bool pass = false;
};

// Composite d: the equal-Busemann diagonal of the product of prime-power
// trees, checked isomorphic to the direct Z_(d)-coset ball.
DiagonalReport diagonal_model(long d, long radius);

}  // namespace bs1d
