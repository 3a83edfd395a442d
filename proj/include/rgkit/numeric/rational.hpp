#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rgkit {

using Rational = mpq_class;
using BigInt = mpz_class;

// Exact conversion: every finite double is a dyadic rational.
inline Rational to_rational(double x) {
  Rational q(x);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational out(1);
  for (unsigned k = 0; k < exponent; ++k) out *= base;
  return out;
}

inline BigInt factorial(unsigned n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

// (2p-1)!! = number of perfect matchings on 2p points; 1 for p = 0.
inline BigInt odd_double_factorial(unsigned p) {
  BigInt out(1);
  for (unsigned k = 1; k <= p; ++k) out *= 2 * k - 1;
  return out;
}

}  // namespace rgkit
