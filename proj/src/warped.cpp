#include "bs1d/warped.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace bs1d {

namespace {

// Golden-section minimum of f on [lo, hi] to parameter tolerance tol.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int iters = 0;
  while (b - a > tol && ++iters < 400) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

double acosh1p(double x) {  // acosh(1 + x) for x >= 0, stable near 0
  return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

}  // namespace

double same_fiber_distance(const TreePoint& z, double w1, double w2, long d) {
  if (d < 2) throw std::invalid_argument("d >= 2 required");
  const double kappa = std::log(static_cast<double>(d));
  const double u = busemann(z);
  const double arg = 0.5 * kappa * std::exp(-kappa * u) * std::fabs(w1 - w2);
  return (2.0 / kappa) * std::asinh(arg);
}

double comparable_distance(const SpacePoint& p1, const SpacePoint& p2, long d) {
  if (!tree_comparable(p1.z, p2.z, d))
    throw std::invalid_argument("comparable_distance needs comparable tree points");
  const double kappa = std::log(static_cast<double>(d));
  const double u1 = busemann(p1.z), u2 = busemann(p2.z);
  const double dw = p1.w - p2.w;
  // A = k^2 dw^2 / (2 d^{u1+u2}) + 2 sinh^2(k (u1-u2) / 2)
  const double sh = std::sinh(0.5 * kappa * (u1 - u2));
  const double A = 0.5 * kappa * kappa * dw * dw * std::exp(-kappa * (u1 + u2)) +
                   2.0 * sh * sh;
  return acosh1p(A) / kappa;
}

double tree_lower_bound(const SpacePoint& p1, const SpacePoint& p2, long d) {
  return tree_distance(p1.z, p2.z, d);
}

double distance(const SpacePoint& p1, const SpacePoint& p2, long d, double tol) {
  if (tol <= 0) throw std::invalid_argument("tol > 0 required");
  if (tree_comparable(p1.z, p2.z, d)) return comparable_distance(p1, p2, d);

  const long m = meet_level(p1.z.base, p2.z.base, d);
  const TreeVertex cv = ancestor_at_level(p1.z.base, m, d);
  const TreePoint c{cv, 0.0};

  const double wlo = std::min(p1.w, p2.w), whi = std::max(p1.w, p2.w);
  auto through = [&](double t, double wc) {
    const TreePoint x = point_at_height(c, height(c) + t, d);
    const SpacePoint mid{x, wc};
    return comparable_distance(p1, mid, d) + comparable_distance(mid, p2, d);
  };
  auto best_at = [&](double t) {
    if (whi - wlo <= tol) return through(t, 0.5 * (wlo + whi));
    double wc = golden_min([&](double w) { return through(t, w); }, wlo, whi, tol);
    return through(t, wc);
  };

  // Bracket the wall height: the objective grows ~2t once past the optimum.
  double hi = 1.0;
  double f0 = best_at(0.0);
  double fh = best_at(hi);
  int guard = 0;
  while (fh < f0 + 1.0 && ++guard < 64) {
    hi *= 2.0;
    fh = best_at(hi);
  }
  if (guard >= 64) throw std::runtime_error("distance minimizer failed to bracket");
  double t = golden_min(best_at, 0.0, hi, tol);
  double val = best_at(t);
  return std::min(val, f0);
}

}  // namespace bs1d
