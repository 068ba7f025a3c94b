#include "bs1d/rational.hpp"

namespace bs1d {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("bad rational: " + text);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::vector<std::pair<long, int>> factorize(long n) {
  if (n < 2) throw std::invalid_argument("factorize needs n >= 2");
  std::vector<std::pair<long, int>> out;
  for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

// v_p of a nonzero machine integer.
long vp_long(long n, long p) {
  long v = 0;
  while (n % p == 0) { n /= p; ++v; }
  return v;
}

// v_p of a nonzero mpz value.
long vp_mpz(const mpz_class& n, long p) {
  mpz_class q, r, cur = n;
  long v = 0;
  while (true) {
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), cur.get_mpz_t(), p);
    if (r != 0) return v;
    cur = q;
    ++v;
  }
}

}  // namespace

DValuation val_d_parts(const mpz_class& num, const mpz_class& den, long d) {
  if (d < 2) throw std::invalid_argument("val_d needs d >= 2");
  if (num == 0) return DValuation{true, 0};
  const auto factors = factorize(d);
  const bool small = num.fits_slong_p() && den.fits_slong_p();
  long t = 0;
  bool first = true;
  if (small) {
    const long n = num.get_si(), e = den.get_si();
    for (auto [p, j] : factors) {
      long v = vp_long(n, p) - vp_long(e, p);
      long c = floor_div(v, j);
      if (first || c < t) t = c;
      first = false;
    }
  } else {
    for (auto [p, j] : factors) {
      long v = vp_mpz(num, p) - vp_mpz(den, p);
      long c = floor_div(v, j);
      if (first || c < t) t = c;
      first = false;
    }
  }
  return DValuation{false, t};
}

DValuation val_d(const Rational& q, long d) {
  return val_d_parts(q.get_num(), q.get_den(), d);
}

bool in_fractional_ideal(const Rational& q, long d, long m) {
  return val_d(q, d) >= -m;
}

long reduce_mod(const Rational& x, long n) {
  if (n < 2) throw std::invalid_argument("reduce_mod needs n >= 2");
  mpz_class nz(static_cast<unsigned long>(n));
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), nz.get_mpz_t()) == 0)
    throw std::domain_error("denominator not invertible mod n");
  mpz_class r = (x.get_num() % nz) * inv % nz;
  if (r < 0) r += nz;
  return r.get_si();
}

bool is_d_integer(const Rational& x, long d) {
  if (d < 2) throw std::invalid_argument("is_d_integer needs d >= 2");
  mpz_class den = x.get_den();
  mpz_class g, dz(d);
  while (den != 1) {
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), dz.get_mpz_t());
    if (g == 1) return false;
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
  }
  return true;
}

Rational d_power(long d, long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), d, static_cast<unsigned long>(e < 0 ? -e : e));
  Rational q;
  if (e >= 0)
    q = Rational(p);
  else
    q = Rational(1) / Rational(p);
  q.canonicalize();
  return q;
}

}  // namespace bs1d
