#pragma once

#include "stackel/rational.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace stk {

/// Monomial exponent vector; one entry per chart coordinate.
using ExpVec = std::vector<std::uint32_t>;

/// Graded lexicographic monomial order (total degree first, then lex).
struct GrlexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const;
};

/// Multivariate polynomial with exact rational coefficients. Terms are kept
/// in graded-lex order and never store a zero coefficient.
class Polynomial {
public:
    using TermMap = std::map<ExpVec, Rational, GrlexLess>;

    Polynomial() : nvars_(0) {}
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& value);
    static Polynomial variable(int nvars, int index);
    static Polynomial monomial(int nvars, ExpVec exponents, const Rational& coeff);
    /// Bulk construction; zero coefficients are dropped.
    static Polynomial from_terms(int nvars, TermMap terms);

    int nvars() const noexcept { return nvars_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Value of a constant polynomial (zero polynomial gives 0).
    Rational constant_value() const;

    const TermMap& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(const Rational& scalar) const;
    Polynomial pow(unsigned exponent) const;

    bool operator==(const Polynomial& other) const {
        return nvars_ == other.nvars_ && terms_ == other.terms_;
    }
    bool operator!=(const Polynomial& other) const { return !(*this == other); }

    Polynomial derivative(int var) const;

    Rational evaluate(std::span<const Rational> point) const;
    double evaluate(std::span<const double> point) const;

    /// Variables with a nonzero exponent in some term.
    std::set<int> support() const;

    int degree(int var) const;  // -1 for the zero polynomial
    int total_degree() const;   // -1 for the zero polynomial

    /// Leading (graded-lex greatest) term; polynomial must be nonzero.
    const std::pair<const ExpVec, Rational>& leading_term() const;

    /// Rational content c with sign of the leading coefficient: p = c * q
    /// where q has coprime integer coefficients and positive leading one.
    Rational content() const;
    /// p / content(): integer, coprime coefficients, positive leading one.
    Polynomial primitive_part() const;

    /// Exact quotient; throws std::logic_error if the division is not exact.
    static Polynomial divide_exact(const Polynomial& a, const Polynomial& b);

    /// Primitive polynomial GCD over Q (positive leading coefficient;
    /// constant 1 when the arguments are coprime or both constant).
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

    std::string to_string(const std::vector<std::string>& names) const;

private:
    void insert_term(const ExpVec& e, const Rational& c);

    int nvars_;
    TermMap terms_;

    friend class RationalFunction;
};

} // namespace stk
