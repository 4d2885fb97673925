#include "stackel/rational.hpp"

#include "stackel/errors.hpp"

#include <cctype>
#include <stdexcept>

namespace stk {

Rational rational_pow(const Rational& q, long k) {
    if (k == 0) return Rational(1);
    bool invert = k < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    Rational base = q;
    if (invert) {
        if (q == 0) throw PoleError("0 raised to a negative power");
        base = Rational(1) / q;
    }
    Rational result(1);
    while (e > 0) {
        if (e & 1UL) result *= base;
        base *= base;
        e >>= 1UL;
    }
    return result;
}

Rational rational_from_string(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        Rational q(text, 10);
        q.canonicalize();
        return q;
    }
    // Decimal literal: digits '.' digits, converted exactly.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty()) throw std::invalid_argument("empty numeric literal");
    Integer num(digits, 10);
    Integer den(1);
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

} // namespace stk
