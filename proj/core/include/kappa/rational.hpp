#pragma once

#include <gmpxx.h>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kappa {

// Exact rationals over arbitrary-precision integers. mpq_class keeps the
// canonical form (gcd 1, positive denominator) after every operation.
using Rational = mpq_class;

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct order_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct singular_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw singular_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational rat_from_string(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

// n! as a Rational, n small.
inline Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Rational r = 1;
  for (int i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

}  // namespace kappa
