#include "bs1d/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace bs1d {

namespace {

constexpr double kInf = kPlusInfinity;

double rel_height(const TreePoint& p, long base) {
  return static_cast<double>(p.base.level - base) + p.lambda;
}

// Height (relative to base) of the first common point of [a, omega) and
// [b, omega).
double meet_height_rel(const TreePoint& a, const TreePoint& b, long base, long d) {
  if (a.base == b.base) return std::max(rel_height(a, base), rel_height(b, base));
  long m = meet_level(a.base, b.base, d);
  if (m == a.base.level) return rel_height(a, base);
  if (m == b.base.level) return rel_height(b, base);
  return static_cast<double>(m - base);
}

// One constant-velocity stretch of a trajectory: at time t in [t0, t1] the
// point sits on [ray, omega) at relative height h0 + slope * (t - t0).
struct Phase {
  double t0, t1;
  TreePoint ray;
  double h0;
  int slope;
};

long base_level(const GeneralizedGeodesic& c) {
  long b = c.anchor.base.level;
  if (c.kind == GeodesicKind::Segment) b = std::min(b, c.target.base.level);
  return b;
}

std::vector<Phase> phases(const GeneralizedGeodesic& c, long base, long d) {
  const double ha = rel_height(c.anchor, base);
  switch (c.kind) {
    case GeodesicKind::Constant:
      return {{-kInf, kInf, c.anchor, ha, 0}};
    case GeodesicKind::RayToOmega:
      return {{-kInf, c.c_minus, c.anchor, ha, 0},
              {c.c_minus, kInf, c.anchor, ha, 1}};
    case GeodesicKind::Segment: {
      const double hb = rel_height(c.target, base);
      const double hm = meet_height_rel(c.anchor, c.target, base, d);
      const double up = hm - ha, down = hm - hb;
      std::vector<Phase> out;
      out.push_back({-kInf, c.c_minus, c.anchor, ha, 0});
      if (up > 0) out.push_back({c.c_minus, c.c_minus + up, c.anchor, ha, 1});
      if (down > 0)
        out.push_back({c.c_minus + up, c.c_minus + up + down, c.target, hm, -1});
      out.push_back({c.c_minus + up + down, kInf, c.target, hb, 0});
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

double eval_profile_at(double m, double h1, double h2) {
  const double below1 = std::max(m - h1, 0.0);
  const double below2 = std::max(m - h2, 0.0);
  return below1 + below2 + std::fabs(std::max(h1, m) - std::max(h2, m));
}

}  // namespace

GeneralizedGeodesic constant_geodesic(const TreePoint& z, double t0) {
  GeneralizedGeodesic c;
  c.kind = GeodesicKind::Constant;
  c.anchor = z;
  c.c_minus = c.c_plus = t0;
  return c;
}

GeneralizedGeodesic ray_to_omega(const TreePoint& z, double t0) {
  GeneralizedGeodesic c;
  c.kind = GeodesicKind::RayToOmega;
  c.anchor = z;
  c.c_minus = t0;
  c.c_plus = kInf;
  return c;
}

GeneralizedGeodesic segment_geodesic(const TreePoint& a, const TreePoint& b,
                                     double t0, long d) {
  GeneralizedGeodesic c;
  c.kind = GeodesicKind::Segment;
  c.anchor = a;
  c.target = b;
  c.c_minus = t0;
  c.c_plus = t0 + tree_distance(a, b, d);
  return c;
}

TreePoint evaluate(const GeneralizedGeodesic& c, double t, long d) {
  switch (c.kind) {
    case GeodesicKind::Constant:
      return c.anchor;
    case GeodesicKind::RayToOmega: {
      const double s = std::max(0.0, t - c.c_minus);
      return point_at_height(c.anchor, height(c.anchor) + s, d);
    }
    case GeodesicKind::Segment: {
      const long base = base_level(c);
      const double ha = rel_height(c.anchor, base);
      const double hb = rel_height(c.target, base);
      const double hm = meet_height_rel(c.anchor, c.target, base, d);
      const double up = hm - ha, total = (hm - ha) + (hm - hb);
      const double s = std::clamp(t - c.c_minus, 0.0, total);
      if (s <= up)
        return point_at_height(c.anchor, height(c.anchor) + s, d);
      return point_at_height(c.target, height(c.target) + (total - s), d);
    }
  }
  throw std::logic_error("unreachable");
}

GeneralizedGeodesic flow(const GeneralizedGeodesic& c, double tau) {
  GeneralizedGeodesic out = c;
  out.c_minus = c.c_minus - tau;
  if (c.kind != GeodesicKind::RayToOmega) out.c_plus = c.c_plus - tau;
  return out;
}

HorizontalFlowPoint psi_embed(const SpacePoint& p) {
  return HorizontalFlowPoint{ray_to_omega(p.z, 0.0), p.w};
}

GeneralizedGeodesic psi_ray(const TreePoint& z, double tau) {
  return flow(ray_to_omega(z, 0.0), tau);
}

GeneralizedGeodesic group_act(const AffineElement& g, const GeneralizedGeodesic& c,
                              long d) {
  GeneralizedGeodesic out = c;
  out.anchor = act(g, c.anchor, d);
  if (c.kind == GeodesicKind::Segment) out.target = act(g, c.target, d);
  return out;
}

GeneralizedGeodesic group_act(const GammaElement& g, const GeneralizedGeodesic& c,
                              long d) {
  return group_act(affine_from_gamma(g, d), c, d);
}

HorizontalFlowPoint group_act(const GammaElement& g, const HorizontalFlowPoint& h,
                              long d) {
  const AffineElement a = affine_from_gamma(g, d);
  const double u = affine_unit(a, d).get_d();
  const double b = a.b.get_d();
  return HorizontalFlowPoint{group_act(g, h.c, d), u * h.w + b};
}

std::vector<ProfilePiece> fs_profile(const GeneralizedGeodesic& c1,
                                     const GeneralizedGeodesic& c2, long d) {
  const long base = std::min(base_level(c1), base_level(c2));
  const auto ph1 = phases(c1, base, d);
  const auto ph2 = phases(c2, base, d);
  std::vector<ProfilePiece> out;
  for (const auto& p : ph1) {
    for (const auto& q : ph2) {
      const double lo = std::max(p.t0, q.t0);
      const double hi = std::min(p.t1, q.t1);
      if (!(lo < hi)) continue;
      const double m = meet_height_rel(p.ray, q.ray, base, d);
      auto h1 = [&](double t) { return p.h0 + p.slope * (t - p.t0); };
      auto h2 = [&](double t) { return q.h0 + q.slope * (t - q.t0); };
      auto dval = [&](double t) { return eval_profile_at(m, h1(t), h2(t)); };

      std::vector<double> cuts{lo, hi};
      auto add_solution = [&](double num, int den) {
        if (den == 0) return;
        const double t = num / den;
        if (t > lo && t < hi) cuts.push_back(t);
      };
      // h1(t) = m, h2(t) = m, h1(t) = h2(t)
      add_solution(m - p.h0 + p.slope * p.t0, p.slope);
      add_solution(m - q.h0 + q.slope * q.t0, q.slope);
      add_solution((q.h0 - q.slope * q.t0) - (p.h0 - p.slope * p.t0),
                   p.slope - q.slope);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u = cuts[i], v = cuts[i + 1];
        double r0, r1;  // two representative points inside [u, v]
        if (u == -kInf && v == kInf) {
          r0 = 0;
          r1 = 1;
        } else if (u == -kInf) {
          r0 = v - 2;
          r1 = v - 1;
        } else if (v == kInf) {
          r0 = u + 1;
          r1 = u + 2;
        } else {
          r0 = u;
          r1 = v;
        }
        double b;
        if (r1 - r0 < 1e-6) {
          b = 0;
          const double mid = dval(0.5 * (r0 + r1));
          out.push_back({u, v, mid, b});
          continue;
        }
        b = (dval(r1) - dval(r0)) / (r1 - r0);
        const double snapped = std::round(b);
        if (std::fabs(b - snapped) > 1e-5)
          throw std::runtime_error("profile slope is not an integer");
        b = snapped;
        const double a = 0.5 * ((dval(r0) - b * r0) + (dval(r1) - b * r1));
        out.push_back({u, v, a, b});
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ProfilePiece& x, const ProfilePiece& y) { return x.t0 < y.t0; });
  return out;
}

double integrate_against_kernel(const std::vector<ProfilePiece>& pieces) {
  // Antiderivatives: (a + b(t-1)) e^t / 2 on t <= 0, -(a + b(t+1)) e^{-t} / 2
  // on t >= 0.
  auto neg_part = [](double a, double b, double u, double v) {
    auto F = [&](double t) {
      return t == -kInf ? 0.0 : 0.5 * (a + b * (t - 1.0)) * std::exp(t);
    };
    return F(v) - F(u);
  };
  auto pos_part = [](double a, double b, double u, double v) {
    auto G = [&](double t) {
      return t == kInf ? 0.0 : -0.5 * (a + b * (t + 1.0)) * std::exp(-t);
    };
    return G(v) - G(u);
  };
  double total = 0;
  for (const auto& piece : pieces) {
    const double u = piece.t0, v = piece.t1;
    if (v <= 0) {
      total += neg_part(piece.a, piece.b, u, v);
    } else if (u >= 0) {
      total += pos_part(piece.a, piece.b, u, v);
    } else {
      total += neg_part(piece.a, piece.b, u, 0.0);
      total += pos_part(piece.a, piece.b, 0.0, v);
    }
  }
  return total;
}

double fs_tree_distance(const GeneralizedGeodesic& c1, const GeneralizedGeodesic& c2,
                        long d) {
  return integrate_against_kernel(fs_profile(c1, c2, d));
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, eps * 0.5, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, eps * 0.5, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double eps) {
  if (!(a < b)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, eps, 28);
}

}  // namespace

double hfs_distance(const HorizontalFlowPoint& h1, const HorizontalFlowPoint& h2,
                    long d, double tol) {
  if (tol <= 0) throw std::invalid_argument("tol > 0 required");
  const auto profile = fs_profile(h1.c, h2.c, d);
  double max_break = 0;
  for (const auto& piece : profile) {
    if (std::isfinite(piece.t0)) max_break = std::max(max_break, std::fabs(piece.t0));
    if (std::isfinite(piece.t1)) max_break = std::max(max_break, std::fabs(piece.t1));
  }
  auto integrand = [&](double t) {
    const SpacePoint a{evaluate(h1.c, t, d), h1.w};
    const SpacePoint b{evaluate(h2.c, t, d), h2.w};
    return distance(a, b, d, std::min(1e-10, tol * 1e-2)) * 0.5 * std::exp(-std::fabs(t));
  };
  double T = std::max(30.0, max_break + 20.0);
  // Positive tail: integrand numerator <= d_T + same-fiber term, both with
  // slope at most 2, so value(T) + 4 (t - T) bounds it.
  double tail = kInf;
  for (int tries = 0; tries < 12; ++tries) {
    const double dT = tree_distance(evaluate(h1.c, T, d), evaluate(h2.c, T, d), d);
    const double sf = same_fiber_distance(evaluate(h1.c, T, d), h1.w, h2.w, d);
    tail = 0.5 * std::exp(-T) * (dT + sf + 4.0);
    if (tail < 0.25 * tol || T > 690.0) break;
    T *= 1.5;
  }
  // Negative side: both curves are frozen before -T, the integrand constant.
  const SpacePoint a0{evaluate(h1.c, -T, d), h1.w};
  const SpacePoint b0{evaluate(h2.c, -T, d), h2.w};
  const double neg_tail =
      distance(a0, b0, d, std::min(1e-10, tol * 1e-2)) * 0.5 * std::exp(-T);

  std::vector<double> cuts{-T, 0.0, T};
  for (const auto& piece : profile) {
    if (std::isfinite(piece.t0) && std::fabs(piece.t0) < T) cuts.push_back(piece.t0);
    if (std::isfinite(piece.t1) && std::fabs(piece.t1) < T) cuts.push_back(piece.t1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0;
  const double eps_piece = 0.25 * tol / static_cast<double>(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate_adaptive(integrand, cuts[i], cuts[i + 1], eps_piece);
  return total + neg_tail + std::min(tail, 0.25 * tol);
}

InqReport lemma_inq_check(const GeneralizedGeodesic& c1, const GeneralizedGeodesic& c2,
                          double tau, long d, double tol) {
  InqReport r;
  r.base = fs_tree_distance(c1, c2, d);
  r.flowed = fs_tree_distance(flow(c1, tau), flow(c2, tau), d);
  r.lower = std::exp(-std::fabs(tau)) * r.base;
  r.upper = std::exp(std::fabs(tau)) * r.base;
  r.pass = r.flowed >= r.lower - tol && r.flowed <= r.upper + tol;
  return r;
}

LparReport lemma_lpar_bound(double epsilon, double D, long d) {
  if (epsilon <= 0 || D <= 0) throw std::invalid_argument("epsilon, D > 0 required");
  LparReport report;
  const double kappa = std::log(static_cast<double>(d));
  report.T = std::max(1.0, std::log(4.0 / epsilon));
  const double need =
      std::exp(kappa * report.T) * std::sinh(0.5 * kappa * D) / std::sinh(kappa * epsilon / 8.0);
  report.n_bar = std::max<long>(1, static_cast<long>(std::ceil(need)));

  // Worst admissible pair at the basepoint: d_X(P_1, Q_1) just below D.
  const TreePoint z0{vertex_p(0), 0.0};
  const double dw = (2.0 / kappa) * std::sinh(0.5 * kappa * (0.95 * D));
  const long nb = report.n_bar;
  const long max_mult = nb > 1'000'000 ? 2 : 10;
  std::vector<long> ns{nb + 1, 2 * nb};
  if (max_mult == 10) ns.push_back(10 * nb);
  report.pass = true;
  for (long n : ns) {
    LparSample s;
    s.n = n;
    const double wn1 = 0.0, wn2 = dw / static_cast<double>(n);
    s.space_dist = same_fiber_distance(z0, wn1, wn2, d);
    const HorizontalFlowPoint hp{psi_ray(z0, 0.0), wn1};
    const HorizontalFlowPoint hq{psi_ray(z0, 0.0), wn2};
    s.hfs_dist = hfs_distance(hp, hq, d, 1e-10);
    s.pass = s.space_dist < epsilon / 4.0 && s.hfs_dist <= epsilon;
    report.pass = report.pass && s.pass;
    report.samples.push_back(s);
  }
  return report;
}

Case2Report case2_estimate_check(long n, double delta, long d) {
  if (n < 1 || delta <= 0) throw std::invalid_argument("n >= 1, delta > 0 required");
  Case2Report report;
  report.tau = std::log(static_cast<double>(n)) - std::log(delta) + static_cast<double>(n);
  report.epsilon = delta * delta / (2.0 * n * std::exp(static_cast<double>(n)));
  const double tau = report.tau;
  report.pass = true;

  // Subcase 1: x1bar on the ray [x2bar, omega) at offset dhat; the behind
  // point is flowed by the extra dhat.
  const TreePoint x2{vertex_p(0), 0.0};
  std::vector<double> dhats{0.0, 0.5, 1.0};
  if (n > 3) dhats.push_back(std::min(3.0, 0.9 * static_cast<double>(n)));
  for (double dhat : dhats) {
    if (dhat >= static_cast<double>(n)) continue;
    Case2Sample s;
    s.subcase = 1;
    s.dhat = dhat;
    const TreePoint x1 = point_at_height(x2, height(x2) + dhat, d);
    const GeneralizedGeodesic a = psi_ray(x2, tau + dhat);
    const GeneralizedGeodesic b = psi_ray(x1, tau);
    s.measured = fs_tree_distance(a, b, d);
    s.bound = 0.5 * dhat * std::exp(-tau);
    s.half_delta = 0.5 * delta;
    s.pass = s.measured <= s.bound + 1e-12 && s.bound < s.half_delta;
    if (dhat == 0.0) s.pass = s.measured <= 1e-12;
    report.pass = report.pass && s.pass;
    report.samples.push_back(s);
  }

  // Subcase 2: rays from two branches below the meet vertex y at distances
  // d1 >= d2; the farther point is flowed by the extra dhat = d1 - d2.
  const TreeVertex y = vertex_p(1);
  std::vector<std::pair<double, double>> configs{{0.5, 0.5}, {1.0, 0.5}, {2.0, 1.0}};
  for (auto [d1, d2] : configs) {
    if (d1 + d2 >= static_cast<double>(n)) continue;
    Case2Sample s;
    s.subcase = 2;
    s.d1 = d1;
    s.d2 = d2;
    s.dhat = d1 - d2;
    const long depth = static_cast<long>(std::ceil(std::max(d1, d2))) + 1;
    const TreeVertex a0 = vertex_canonicalize(Rational(0), 1 - depth, d);
    const TreeVertex a1 = vertex_canonicalize(d_power(d, -1), 1 - depth, d);
    const TreePoint x1 = point_at_height(TreePoint{a0, 0.0}, 1.0 - d1, d);
    const TreePoint x2b = point_at_height(TreePoint{a1, 0.0}, 1.0 - d2, d);
    const GeneralizedGeodesic ga = psi_ray(x1, tau + s.dhat);
    const GeneralizedGeodesic gb = psi_ray(x2b, tau);
    s.measured = fs_tree_distance(ga, gb, d);
    s.bound = 0.5 * static_cast<double>(n) * std::exp(-(tau - d1));
    s.half_delta = 0.5 * delta;
    s.pass = s.measured <= s.bound + 1e-12 && s.bound < s.half_delta;
    report.pass = report.pass && s.pass;
    report.samples.push_back(s);
  }
  return report;
}

PeriodicReport count_periodic(long m, long d) {
  if (m < 1 || d < 2) throw std::invalid_argument("m >= 1, d >= 2 required");
  PeriodicReport r;
  mpz_class dm;
  mpz_ui_pow_ui(dm.get_mpz_t(), d, static_cast<unsigned long>(m));
  mpz_class cnt = dm - 1;
  if (!cnt.fits_slong_p()) throw std::invalid_argument("d^m too large");
  r.count = cnt.get_si();
  // Brute force: every x = j/(d^m - 1) solves d^m x = x (mod 1), candidates
  // are distinct, and any solution in [0,1) must have (d^m - 1) x integral.
  bool ok = true;
  for (long j = 0; j < r.count; ++j) {
    Rational x = make_rational(j, r.count);
    Rational moved = x * Rational(dm) - x;
    moved.canonicalize();
    if (moved.get_den() != 1) {
      ok = false;
      break;
    }
  }
  // A non-candidate fails: x = 1/(d^m) has (d^m - 1)/d^m not integral.
  Rational probe = make_rational(1, r.count + 1) * Rational(cnt);
  probe.canonicalize();
  if (probe.get_den() == 1) ok = false;
  r.verified = ok;
  return r;
}

}  // namespace bs1d
