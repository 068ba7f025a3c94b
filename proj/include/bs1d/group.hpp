#pragma once

#include "bs1d/rational.hpp"

namespace bs1d {

// Element (x, k) of Z[1/d] x|_alpha Z, alpha = multiplication by d.
// Matrix form: [[d^-k, x], [0, 1]].
struct GammaElement {
  Rational x;
  long k = 0;

  bool operator==(const GammaElement& o) const { return k == o.k && x == o.x; }
};

// Element of G_d (and of Aff(Z[1/p]) via sign): affine map w -> u*w + b with
// scaling unit u = sign * d^{-n} * s1/s2, s1/s2 in lowest terms and coprime
// to d. n is the tree-level shift: acting on T_d sends level k to k + n and
// the Busemann value f to f - n.
struct AffineElement {
  int sign = 1;
  long n = 0;
  long s1 = 1;
  long s2 = 1;
  Rational b = Rational(0);
};

bool gamma_valid(const GammaElement& g, long d);

GammaElement gamma_identity();
GammaElement gamma_mul(const GammaElement& g, const GammaElement& h, long d);
GammaElement gamma_inv(const GammaElement& g, long d);
GammaElement gamma_pow(const GammaElement& g, long n, long d);
// t g t^{-1}
GammaElement gamma_conj(const GammaElement& t, const GammaElement& g, long d);

// Exact 2x2 rational matrix.
struct Mat2q {
  Rational a, b, c, d;

  bool operator==(const Mat2q& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
};

Mat2q mat_identity();
Mat2q mat_mul(const Mat2q& m, const Mat2q& n);
Mat2q to_matrix(const GammaElement& g, long d);
bool matrix_consistency_check(const GammaElement& g, const GammaElement& h, long d);

// Scaling unit of an affine element as an exact rational.
Rational affine_unit(const AffineElement& g, long d);
AffineElement affine_identity();
// Builds an affine element from an exact unit u and translation b; throws if
// u cannot be written as sign * d^e * s1/s2 with s1, s2 coprime to d.
AffineElement affine_from_unit(const Rational& u, const Rational& b, long d);
AffineElement affine_from_gamma(const GammaElement& g, long d);
AffineElement affine_mul(const AffineElement& g, const AffineElement& h, long d);
AffineElement affine_inv(const AffineElement& g, long d);
bool affine_eq(const AffineElement& g, const AffineElement& h, long d);

// u*w + b, exactly.
Rational act_on_real(const AffineElement& g, const Rational& w, long d);

// phi((x,k)) = (q^s x, k); a monomorphism onto the preimage of {0} x Z_{t_s}.
GammaElement phi_embed(const GammaElement& g, long qs);
// Inverse of phi; throws if g is not in the image (x/qs not in Z[1/d]).
GammaElement phi_inverse(const GammaElement& g, long qs, long d);

}  // namespace bs1d
