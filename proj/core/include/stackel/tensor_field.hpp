#pragma once

#include "stackel/phase_poly.hpp"
#include "stackel/scalar_field.hpp"

#include <span>
#include <string>
#include <vector>

namespace stk {

/// Square matrix of scalar fields sharing one chart and backend.
class FieldMatrix {
public:
    FieldMatrix(Chart chart, Backend backend, int size);
    FieldMatrix(Chart chart, std::vector<ScalarField> row_major);

    int size() const noexcept { return size_; }
    const Chart& chart() const noexcept { return chart_; }
    Backend backend() const noexcept { return backend_; }

    const ScalarField& at(int row, int col) const;
    void set(int row, int col, ScalarField value);

    bool is_symmetric() const; // exact: structural; numeric: sampled
    FieldMatrix operator*(const FieldMatrix& other) const;
    FieldMatrix operator+(const FieldMatrix& other) const;
    FieldMatrix scaled(const Rational& factor) const;

    /// Symbolic determinant by cofactor expansion (column subsets memoized).
    ScalarField determinant() const;
    /// Symbolic inverse adj(A)/det(A); throws SingularError when the
    /// determinant is identically zero (exact) or not testable (numeric
    /// fields are checked by sampling before use elsewhere).
    FieldMatrix inverse() const;

    /// Entries evaluated at a double point, row-major.
    std::vector<double> evaluate(std::span<const double> point) const;

private:
    Chart chart_;
    Backend backend_;
    int size_;
    std::vector<ScalarField> entries_; // row major
};

/// Pseudo-Riemannian metric stored by its inverse components g^{ij} (the
/// matrix entering the Hamiltonian). The lowered components g_{ij} are the
/// symbolic matrix inverse, computed once at construction.
class Metric {
public:
    Metric(Chart chart, FieldMatrix inverse_components);

    const Chart& chart() const noexcept { return chart_; }
    Backend backend() const noexcept { return upper_.backend(); }
    int dimension() const noexcept { return upper_.size(); }
    const FieldMatrix& inverse_components() const noexcept { return upper_; }
    const FieldMatrix& lowered() const noexcept { return lower_; }

    /// 2H = g^{ij} p_i p_j as a momenta polynomial.
    MomentaPolynomial twice_hamiltonian() const;

private:
    Chart chart_;
    FieldMatrix upper_;
    FieldMatrix lower_;
};

/// Symmetric (2,0)-tensor K^{ij} whose quadratic form is a candidate first
/// integral of the geodesic flow.
struct QuadraticIntegral {
    QuadraticIntegral(Chart chart, FieldMatrix components, std::string label);

    Chart chart;
    FieldMatrix components;
    std::string label;
};

/// Coefficients of a linear combination over the non-Hamiltonian integrals
/// (indices 2..n); empty only in dimension one.
struct CombinationSpec {
    explicit CombinationSpec(std::vector<Rational> coefficients);
    std::vector<Rational> coefficients;
};

/// K^{ij} p_i p_j with the off-diagonal terms doubled by symmetry.
MomentaPolynomial quadratic_to_poly(const QuadraticIntegral& k);

/// {g^{ij} p_i p_j, K^{kl} p_k p_l}; identically zero exactly when K is a
/// Killing tensor for g.
MomentaPolynomial killing_residual(const Metric& g, const QuadraticIntegral& k);

/// The (1,1)-tensor K^i_j = K^{si} g_{sj}.
FieldMatrix one_one(const QuadraticIntegral& k, const Metric& g);

/// Componentwise sum lambda_2 K_2 + ... + lambda_n K_n.
QuadraticIntegral generic_combination(std::span<const QuadraticIntegral> ks,
                                      const CombinationSpec& lambda);

} // namespace stk
