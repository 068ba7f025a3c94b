#pragma once

#include "bs1d/group.hpp"
#include "bs1d/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace bs1d {

// Vertex of the Bass-Serre tree T_d, modeled as the coset
// residue + d^{-level} Z_(d) with Z_(d) = rationals with denominator coprime
// to d. The residue is the canonical representative d^{-level} * r with
// r in Z[1/d] cut to [0,1). The line L_0 is {P_n = (0, n)}; the Busemann
// function toward omega is f_d(vertex) = -level, so the parent (one step
// toward omega) lives at level + 1.
struct TreeVertex {
  Rational residue;
  long level = 0;

  bool operator==(const TreeVertex& o) const {
    return level == o.level && residue == o.residue;
  }
  bool operator!=(const TreeVertex& o) const { return !(*this == o); }
  bool operator<(const TreeVertex& o) const {
    if (level != o.level) return level < o.level;
    return cmp(residue, o.residue) < 0;
  }
};

// Point on the closed edge [base, parent(base)], offset lambda in [0,1)
// measured from base toward the parent. lambda = 0 is the vertex itself.
struct TreePoint {
  TreeVertex base;
  double lambda = 0.0;
};

TreeVertex vertex_canonicalize(const Rational& x, long k, long d);
TreeVertex vertex_p(long n);  // P_n = (0, n) on L_0

TreeVertex parent(const TreeVertex& v, long d);
std::vector<TreeVertex> children(const TreeVertex& v, long d);
// Ancestor of v on [v, omega) at level m >= v.level.
TreeVertex ancestor_at_level(const TreeVertex& v, long m, long d);

double busemann(const TreePoint& p);
inline double busemann(const TreeVertex& v) { return static_cast<double>(-v.level); }

// Level of the first vertex on both rays [v1, omega), [v2, omega):
// max(k1, k2, -val_d(x1 - x2)).
long meet_level(const TreeVertex& v1, const TreeVertex& v2, long d);
TreeVertex meet_toward_omega(const TreeVertex& v1, const TreeVertex& v2, long d);

long tree_distance(const TreeVertex& v1, const TreeVertex& v2, long d);
double tree_distance(const TreePoint& p1, const TreePoint& p2, long d);

// True iff one point lies on the ray [other, omega).
bool tree_comparable(const TreePoint& p1, const TreePoint& p2, long d);

// Point on [p, omega) at Busemann height -f = level+lambda equal to h.
TreePoint point_at_height(const TreePoint& p, double h, long d);
inline double height(const TreePoint& p) {
  return static_cast<double>(p.base.level) + p.lambda;
}

// S(z, l): descendants of z at tree distance exactly l (d^l of them).
std::vector<TreeVertex> sphere(const TreeVertex& z, long l, long d);
bool horoball_contains(const TreeVertex& v, long n);
bool subtree_contains(const TreeVertex& z, const TreeVertex& v, long d);

TreeVertex act(const AffineElement& g, const TreeVertex& v, long d);
TreePoint act(const AffineElement& g, const TreePoint& p, long d);

// Explicit finite ball, the ground-truth oracle for distances and actions.
struct BallGraph {
  std::vector<TreeVertex> verts;
  std::map<TreeVertex, int> index;
  std::vector<std::vector<int>> adj;
  int center = 0;

  bool contains(const TreeVertex& v) const { return index.count(v) > 0; }
  int id(const TreeVertex& v) const { return index.at(v); }
};

BallGraph bfs_ball(const TreeVertex& center, long radius, long d);
// BFS distances from source within the ball graph (-1 if unreachable).
std::vector<int> bfs_distances(const BallGraph& ball, int source);

std::string vertex_label(const TreeVertex& v);
// One edge per line, "childlabel parentlabel", lexicographically sorted.
std::string ball_adjacency_text(const BallGraph& ball);

}  // namespace bs1d
