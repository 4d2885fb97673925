#include "stackel/rational_function.hpp"

#include "stackel/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace stk {

RationalFunction::RationalFunction(int nvars)
    : num_(nvars), den_(Polynomial::constant(nvars, Rational(1))) {}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (num_.nvars() != den_.nvars()) throw std::invalid_argument("mixed variable counts");
    if (den_.is_zero()) throw SingularError("zero denominator");
    reduce();
}

RationalFunction RationalFunction::constant(int nvars, const Rational& value) {
    return from_polynomial(Polynomial::constant(nvars, value));
}

RationalFunction RationalFunction::variable(int nvars, int index) {
    return from_polynomial(Polynomial::variable(nvars, index));
}

RationalFunction RationalFunction::from_polynomial(Polynomial p) {
    RationalFunction f(p.nvars());
    f.num_ = std::move(p);
    return f;
}

bool RationalFunction::is_polynomial() const {
    return den_.is_constant();
}

bool RationalFunction::is_constant() const {
    return num_.is_constant() && den_.is_constant();
}

Rational RationalFunction::constant_value() const {
    return num_.constant_value() / den_.constant_value();
}

void RationalFunction::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(num_.nvars(), Rational(1));
        return;
    }
    if (!den_.is_constant()) {
        Polynomial g = Polynomial::gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = Polynomial::divide_exact(num_, g);
            den_ = Polynomial::divide_exact(den_, g);
        }
    }
    // Canonical scale: denominator primitive with positive leading coefficient.
    Rational c = den_.content();
    if (c != 1) {
        Rational inv = Rational(1) / c;
        den_ = den_ * inv;
        num_ = num_ * inv;
    }
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFunction RationalFunction::operator+(const RationalFunction& other) const {
    if (nvars() != other.nvars()) throw std::invalid_argument("mixed variable counts");
    if (den_ == other.den_) return RationalFunction(num_ + other.num_, den_);
    if (is_polynomial() && other.is_polynomial()) {
        Rational a = den_.constant_value(), b = other.den_.constant_value();
        return from_polynomial(num_ * (Rational(1) / a) + other.num_ * (Rational(1) / b));
    }
    return RationalFunction(num_ * other.den_ + other.num_ * den_, den_ * other.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& other) const {
    return *this + (-other);
}

RationalFunction RationalFunction::operator*(const RationalFunction& other) const {
    if (nvars() != other.nvars()) throw std::invalid_argument("mixed variable counts");
    if (num_.is_zero() || other.num_.is_zero()) return RationalFunction(nvars());
    // Cross-reduction: both operands are reduced, so the result below is too.
    Polynomial g1 = Polynomial::gcd(num_, other.den_);
    Polynomial g2 = Polynomial::gcd(other.num_, den_);
    Polynomial a = g1.is_constant() ? num_ : Polynomial::divide_exact(num_, g1);
    Polynomial d = g1.is_constant() ? other.den_ : Polynomial::divide_exact(other.den_, g1);
    Polynomial c = g2.is_constant() ? other.num_ : Polynomial::divide_exact(other.num_, g2);
    Polynomial b = g2.is_constant() ? den_ : Polynomial::divide_exact(den_, g2);
    RationalFunction out(nvars());
    out.num_ = a * c;
    out.den_ = b * d;
    Rational scale = out.den_.content();
    if (scale != 1) {
        Rational inv = Rational(1) / scale;
        out.den_ = out.den_ * inv;
        out.num_ = out.num_ * inv;
    }
    return out;
}

RationalFunction RationalFunction::operator/(const RationalFunction& other) const {
    if (other.is_zero()) throw SingularError("division by zero rational function");
    RationalFunction inverse(other.nvars());
    inverse.num_ = other.den_;
    inverse.den_ = other.num_;
    Rational scale = inverse.den_.content();
    if (scale != 1) {
        Rational inv = Rational(1) / scale;
        inverse.den_ = inverse.den_ * inv;
        inverse.num_ = inverse.num_ * inv;
    }
    return *this * inverse;
}

RationalFunction RationalFunction::pow(int exponent) const {
    if (exponent == 0) return constant(nvars(), Rational(1));
    bool invert = exponent < 0;
    unsigned e = invert ? static_cast<unsigned>(-exponent) : static_cast<unsigned>(exponent);
    RationalFunction base = *this;
    if (invert) base = constant(nvars(), Rational(1)) / base;
    RationalFunction result = constant(nvars(), Rational(1));
    while (e > 0) {
        if (e & 1U) result = result * base;
        base = (e >>= 1U) ? base * base : base;
    }
    return result;
}

RationalFunction RationalFunction::derivative(int var) const {
    if (den_.is_constant()) {
        RationalFunction out(nvars());
        out.num_ = num_.derivative(var) * (Rational(1) / den_.constant_value());
        return out;
    }
    Polynomial dn = num_.derivative(var);
    Polynomial dd = den_.derivative(var);
    return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

Rational RationalFunction::evaluate(std::span<const Rational> point) const {
    Rational d = den_.evaluate(point);
    if (d == 0) throw PoleError("denominator vanishes at evaluation point");
    return num_.evaluate(point) / d;
}

double RationalFunction::evaluate(std::span<const double> point) const {
    double d = den_.evaluate(point);
    if (d == 0.0) throw PoleError("denominator vanishes at evaluation point");
    double value = num_.evaluate(point) / d;
    if (!std::isfinite(value)) throw PoleError("non-finite value at evaluation point");
    return value;
}

std::set<int> RationalFunction::support() const {
    std::set<int> vars = num_.support();
    std::set<int> den_vars = den_.support();
    vars.insert(den_vars.begin(), den_vars.end());
    return vars;
}

std::string RationalFunction::to_string(const std::vector<std::string>& names) const {
    if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string(names);
    return "(" + num_.to_string(names) + ")/(" + den_.to_string(names) + ")";
}

} // namespace stk
