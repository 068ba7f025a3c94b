#include "bs1d/group.hpp"

#include <numeric>

namespace bs1d {

bool gamma_valid(const GammaElement& g, long d) { return is_d_integer(g.x, d); }

GammaElement gamma_identity() { return {Rational(0), 0}; }

GammaElement gamma_mul(const GammaElement& g, const GammaElement& h, long d) {
  // (a,b)(a',b') = (a + d^{-b} a', b + b')
  return {g.x + d_power(d, -g.k) * h.x, g.k + h.k};
}

GammaElement gamma_inv(const GammaElement& g, long d) {
  // (a,b)^{-1} = (-d^b a, -b)
  return {-(d_power(d, g.k) * g.x), -g.k};
}

GammaElement gamma_pow(const GammaElement& g, long n, long d) {
  if (n < 0) return gamma_pow(gamma_inv(g, d), -n, d);
  if (n == 0) return gamma_identity();
  // (a,b)^n = ((1 + d^{-b} + ... + d^{-(n-1)b}) a, nb)
  Rational sigma;
  if (g.k == 0) {
    sigma = Rational(n);
  } else {
    Rational r = d_power(d, -g.k);
    Rational rn = d_power(d, -g.k * n);
    sigma = (1 - rn) / (1 - r);
  }
  return {sigma * g.x, n * g.k};
}

GammaElement gamma_conj(const GammaElement& t, const GammaElement& g, long d) {
  // (x,y)(a,b)(x,y)^{-1} = ((1 - d^{-b}) x + d^{-y} a, b)
  return {(1 - d_power(d, -g.k)) * t.x + d_power(d, -t.k) * g.x, g.k};
}

Mat2q mat_identity() { return {Rational(1), Rational(0), Rational(0), Rational(1)}; }

Mat2q mat_mul(const Mat2q& m, const Mat2q& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

Mat2q to_matrix(const GammaElement& g, long d) {
  return {d_power(d, -g.k), g.x, Rational(0), Rational(1)};
}

bool matrix_consistency_check(const GammaElement& g, const GammaElement& h, long d) {
  return to_matrix(gamma_mul(g, h, d), d) == mat_mul(to_matrix(g, d), to_matrix(h, d));
}

Rational affine_unit(const AffineElement& g, long d) {
  Rational u = d_power(d, -g.n) * make_rational(g.s1, g.s2);
  return g.sign < 0 ? -u : u;
}

AffineElement affine_identity() { return {}; }

AffineElement affine_from_unit(const Rational& u, const Rational& b, long d) {
  if (u == 0) throw std::invalid_argument("affine unit must be nonzero");
  const auto factors = factorize(d);
  // The d-part of u must be a pure power of d.
  Rational au = u > 0 ? u : Rational(-u);
  long e = 0;
  bool first = true;
  for (auto [p, j] : factors) {
    DValuation vn = val_d_parts(au.get_num(), mpz_class(1), p);
    DValuation vd = val_d_parts(au.get_den(), mpz_class(1), p);
    long v = vn.value - vd.value;
    if (v % j != 0) throw std::invalid_argument("unit is not in G_d");
    long cand = v / j;
    if (!first && cand != e) throw std::invalid_argument("unit is not in G_d");
    e = cand;
    first = false;
  }
  Rational s = au / d_power(d, e);
  if (!s.get_num().fits_slong_p() || !s.get_den().fits_slong_p())
    throw std::invalid_argument("unit coprime part too large");
  AffineElement out;
  out.sign = u > 0 ? 1 : -1;
  out.n = -e;  // unit = sign * d^{-n} * s1/s2
  out.s1 = s.get_num().get_si();
  out.s2 = s.get_den().get_si();
  out.b = b;
  return out;
}

AffineElement affine_from_gamma(const GammaElement& g, long d) {
  AffineElement out;
  out.sign = 1;
  out.n = g.k;
  out.s1 = out.s2 = 1;
  out.b = g.x;
  return out;
}

AffineElement affine_mul(const AffineElement& g, const AffineElement& h, long d) {
  // (u1, b1)(u2, b2): w -> u1 (u2 w + b2) + b1
  Rational u = affine_unit(g, d) * affine_unit(h, d);
  Rational b = affine_unit(g, d) * h.b + g.b;
  return affine_from_unit(u, b, d);
}

AffineElement affine_inv(const AffineElement& g, long d) {
  Rational u = affine_unit(g, d);
  return affine_from_unit(1 / u, -(g.b / u), d);
}

bool affine_eq(const AffineElement& g, const AffineElement& h, long d) {
  return affine_unit(g, d) == affine_unit(h, d) && g.b == h.b;
}

Rational act_on_real(const AffineElement& g, const Rational& w, long d) {
  return affine_unit(g, d) * w + g.b;
}

GammaElement phi_embed(const GammaElement& g, long qs) {
  return {Rational(qs) * g.x, g.k};
}

GammaElement phi_inverse(const GammaElement& g, long qs, long d) {
  Rational x = g.x / Rational(qs);
  x.canonicalize();
  if (!is_d_integer(x, d))
    throw std::domain_error("element is not in the image of phi (Kbar)");
  return {x, g.k};
}

}  // namespace bs1d
