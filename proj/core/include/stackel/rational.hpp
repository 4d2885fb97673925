#pragma once

#include <gmpxx.h>

#include <string>

namespace stk {

/// Arbitrary-precision rational scalar. GMP keeps every value canonical
/// (reduced, denominator positive), which polynomial GCD reduction relies on.
using Rational = mpq_class;
using Integer = mpz_class;

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// q^k for integer k (k < 0 requires q != 0).
Rational rational_pow(const Rational& q, long k);

/// Parses "a", "a/b" or a decimal literal like "1.25" exactly.
Rational rational_from_string(const std::string& text);

std::string to_string(const Rational& q);

} // namespace stk
