#pragma once

#include "stackel/phase_poly.hpp"
#include "stackel/sampling.hpp"
#include "stackel/tensor_field.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stk {

/// An n x n matrix S whose i-th row depends only on the i-th coordinate.
/// Solving S I = P for the column of quadratic forms I (P the column of
/// squared momenta) produces n commuting integrals; one row of S^-1 supplies
/// the inverse metric.
struct StackelMatrix {
    StackelMatrix(Chart chart, FieldMatrix entries);

    Chart chart;
    FieldMatrix entries;
};

/// validate_stackel findings. Univariance or singularity failures make the
/// matrix unusable; zeros in the Hamiltonian row of S^-1 are warnings (the
/// metric would be degenerate if that row were used).
struct StackelDiagnostics {
    std::vector<std::pair<int, int>> univariance_violations; // (row, col), 0-based
    bool nonsingular = false;
    std::vector<int> first_row_zeros; // columns j with (S^-1)_{hamiltonian_row, j} == 0

    bool valid() const { return univariance_violations.empty() && nonsingular; }
    std::string summary() const;
};

StackelDiagnostics validate_stackel(const StackelMatrix& s, int hamiltonian_row = 0);

/// A metric together with its full family of n commuting quadratic
/// integrals; integrals[0] is the metric's own quadratic form.
struct StackelSystem {
    Metric metric;
    std::vector<QuadraticIntegral> integrals;
    StackelMatrix source;
    int hamiltonian_row = 0;

    int dimension() const { return metric.dimension(); }
    /// integrals as momenta polynomials (in order).
    std::vector<MomentaPolynomial> integral_polys() const;
    /// Index into `integrals` of the integral built from row `row` of S^-1.
    int list_index_of_row(int row) const;
};

/// Builds the system S I = P: integral a has the diagonal components
/// (S^-1)_{a j}; the chosen row doubles as the inverse metric. Throws
/// SingularError / std::invalid_argument on an unusable S.
StackelSystem stackel_integrals(const StackelMatrix& s, int hamiltonian_row = 0);

/// Pairwise bracket zero reports; entry (a, b) reports {I_a, I_b}.
std::vector<std::vector<ZeroReport>> involution_matrix(std::span<const MomentaPolynomial> integrals);

// --- shipped example matrices (exact backend unless requested otherwise) ---

/// [[1, -1], [0, 1]]: flat Cartesian plane.
StackelMatrix example_flat_matrix(Backend backend = Backend::Exact);
/// [[1, -1/x1^2], [0, 1]]: Euclidean plane in polar coordinates (x1 = r).
StackelMatrix example_polar_matrix(Backend backend = Backend::Exact);
/// [[x1, -1], [x2, -1]]: a Liouville-type surface metric.
StackelMatrix example_liouville_matrix(Backend backend = Backend::Exact);

/// Seeded random matrix with entries a + b x_i + c x_i^2 (small rationals),
/// resampled until univariance/determinant/Hamiltonian-row checks all pass.
StackelMatrix random_stackel_matrix(int dimension, SeededRng& rng,
                                    Backend backend = Backend::Exact);

} // namespace stk
