#pragma once

#include "stackel/polynomial.hpp"

#include <set>
#include <span>
#include <string>
#include <vector>

namespace stk {

/// Quotient of two multivariate polynomials, always kept reduced: the GCD of
/// numerator and denominator is 1 and the denominator has coprime integer
/// coefficients with positive leading one. This makes equality structural
/// and zero-testing exact.
class RationalFunction {
public:
    RationalFunction() : RationalFunction(0) {}
    explicit RationalFunction(int nvars); // zero
    RationalFunction(Polynomial numerator, Polynomial denominator);

    static RationalFunction constant(int nvars, const Rational& value);
    static RationalFunction variable(int nvars, int index);
    static RationalFunction from_polynomial(Polynomial p);

    int nvars() const noexcept { return num_.nvars(); }
    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const;
    bool is_constant() const;
    Rational constant_value() const;

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& other) const;
    RationalFunction operator-(const RationalFunction& other) const;
    RationalFunction operator*(const RationalFunction& other) const;
    RationalFunction operator/(const RationalFunction& other) const;
    RationalFunction pow(int exponent) const;

    bool operator==(const RationalFunction& other) const {
        return num_ == other.num_ && den_ == other.den_;
    }
    bool operator!=(const RationalFunction& other) const { return !(*this == other); }

    RationalFunction derivative(int var) const;

    /// Exact evaluation; throws PoleError when the denominator vanishes.
    Rational evaluate(std::span<const Rational> point) const;
    double evaluate(std::span<const double> point) const;

    /// Variables of the reduced representation.
    std::set<int> support() const;

    std::string to_string(const std::vector<std::string>& names) const;

private:
    void reduce();

    Polynomial num_, den_;
};

} // namespace stk
