#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bs1d {

// Exact rationals are GMP mpq_class values, always canonicalized
// (gcd(num, den) = 1, den >= 1, zero is 0/1).
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// d-adic valuation: value of val_d, with +infinity exactly for 0.
struct DValuation {
  bool infinite = false;
  long value = 0;

  bool operator==(const DValuation& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  bool operator>=(long m) const { return infinite || value >= m; }
};

// Prime factorization of a small positive integer, as (prime, exponent) pairs.
std::vector<std::pair<long, int>> factorize(long n);

// Largest t with q in d^t * Z_(d), where Z_(d) = rationals with denominator
// coprime to d. For d = prod p_i^{j_i} this is min_i floor(v_{p_i}(q) / j_i).
DValuation val_d(const Rational& q, long d);

// val_d of num/den without constructing a canonicalized Rational.
DValuation val_d_parts(const mpz_class& num, const mpz_class& den, long d);

// True iff val_d(q) >= -m, i.e. q lies in the fractional ideal d^{-m} Z_(d).
bool in_fractional_ideal(const Rational& q, long d, long m);

// numerator * denominator^{-1} mod n; throws if the denominator is not
// invertible mod n.
long reduce_mod(const Rational& x, long n);

// True iff the denominator of x divides a power of d (x in Z[1/d]).
bool is_d_integer(const Rational& x, long d);

// d^e as an exact rational, e of either sign.
Rational d_power(long d, long e);

// Floor division with sign toward -infinity.
inline long floor_div(long a, long b) {
  long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline long mod_nonneg(long a, long b) {
  long r = a % b;
  return r < 0 ? r + b : r;
}

}  // namespace bs1d
