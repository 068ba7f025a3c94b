#pragma once

#include "bs1d/tree.hpp"

namespace bs1d {

// Point of X = T_d x R carrying the warped product metric with warping
// function d^{-f_d}. Planes L x R have constant curvature -(ln d)^2.
struct SpacePoint {
  TreePoint z;
  double w = 0.0;
};

// Geodesic distance between (z, w1) and (z, w2) in the same fiber:
// D = (2/k) asinh(k * d^{-f_d(z)} * |w1 - w2| / 2), k = ln d.
double same_fiber_distance(const TreePoint& z, double w1, double w2, long d);

// Distance when z1 lies on [z2, omega) or vice versa, via the isometry
// (u, w) -> (k w, d^u) onto the curvature -k^2 upper half-plane:
// cosh(k D) = 1 + (k^2 dw^2 + (d^{u1} - d^{u2})^2) / (2 d^{u1} d^{u2}).
double comparable_distance(const SpacePoint& p1, const SpacePoint& p2, long d);

// General distance. Comparable pairs use the closed form; otherwise the
// infimum over crossing points on the wall [c, omega) x R, c the meet of the
// tree coordinates, minimized by nested golden sections to tolerance tol.
double distance(const SpacePoint& p1, const SpacePoint& p2, long d, double tol = 1e-9);

// d_T(z1, z2); a lower bound for distance.
double tree_lower_bound(const SpacePoint& p1, const SpacePoint& p2, long d);

}  // namespace bs1d
