#pragma once

#include "stackel/polynomial.hpp"
#include "stackel/scalar_field.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stk {

/// A point of the cotangent bundle in chart coordinates.
struct PhaseState {
    std::vector<double> position;
    std::vector<double> momentum;
};

/// Result of a zero test. Exact backend decides the flag symbolically;
/// the residual (max sampled |coefficient|) is always reported so callers
/// can apply their own thresholds.
struct ZeroReport {
    bool zero = false;
    double residual = 0.0;
};

inline constexpr double kNumericZeroTol = 1e-9;
inline constexpr std::uint64_t kZeroSampleSeed = 0x5eedf00dULL;

/// Polynomial in the fiber momenta p_1..p_n with ScalarField coefficients:
/// the algebra containing Hamiltonians, quadratic integrals and their
/// Poisson brackets. Immutable value type.
class MomentaPolynomial {
public:
    using TermMap = std::map<ExpVec, ScalarField, GrlexLess>;

    MomentaPolynomial(Chart chart, Backend backend);

    static MomentaPolynomial momentum(const Chart& chart, int index, Backend backend);

    const Chart& chart() const noexcept { return chart_; }
    Backend backend() const noexcept { return backend_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool has_no_terms() const noexcept { return terms_.empty(); }

    /// Adds coeff * p^exponents; identically-zero coefficients are dropped.
    void add_term(const ExpVec& exponents, const ScalarField& coeff);
    /// Coefficient of p^exponents (zero field when absent).
    ScalarField coefficient(const ExpVec& exponents) const;

    MomentaPolynomial operator-() const;
    MomentaPolynomial operator+(const MomentaPolynomial& other) const;
    MomentaPolynomial operator-(const MomentaPolynomial& other) const;
    MomentaPolynomial operator*(const MomentaPolynomial& other) const;
    MomentaPolynomial scaled(const ScalarField& factor) const;
    MomentaPolynomial scaled(const Rational& factor) const;

    /// d/dx_i applied to every coefficient.
    MomentaPolynomial partial_position(int var) const;
    /// d/dp_i on the momentum monomials.
    MomentaPolynomial partial_momentum(int var) const;

    double evaluate(const PhaseState& state) const;

    /// Momentum degree of the polynomial (-1 when there are no terms).
    int momentum_degree() const;
    /// Degree when all stored terms share one momentum degree.
    std::optional<int> homogeneous_degree() const;

    ZeroReport zero_report(std::uint64_t seed = kZeroSampleSeed) const;

    std::string to_string() const;

private:
    Chart chart_;
    Backend backend_;
    TermMap terms_;
};

/// Canonical Poisson bracket {F,G} = sum_i dF/dp_i dG/dx_i - dF/dx_i dG/dp_i.
/// Homogeneous degrees (a, b) produce degree a + b - 1.
MomentaPolynomial poisson_bracket(const MomentaPolynomial& f, const MomentaPolynomial& g);

} // namespace stk
