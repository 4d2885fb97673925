#pragma once

#include "stackel/frame_diag.hpp"
#include "stackel/stackel.hpp"

#include <Eigen/Dense>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace stk {

/// A field of frames: row s holds the components of the vector field v_s.
/// For a diagonal metric the rows are sqrt(sign * g^{ss}) times the
/// coordinate directions, so the metric becomes diag(signs) and every
/// integral of the system is diagonal in the frame.
struct FrameField {
    Chart chart;
    std::vector<std::vector<ScalarField>> rows;
    BlockPartition blocks;
    std::vector<int> signs;

    int dimension() const { return static_cast<int>(rows.size()); }
    /// Row entries evaluated at a point (rows of the returned matrix).
    Eigen::MatrixXd evaluate(const Eigen::VectorXd& point) const;
    /// v_s as a linear-in-momenta polynomial.
    MomentaPolynomial row_linear_form(int s) const;
    /// V_j = sum over the j-th block of sign * (v_s)^2.
    MomentaPolynomial block_quadratic(int block) const;
};

/// Frame of a coordinate-diagonal system: normalized coordinate directions,
/// signs from the metric diagonal at `point`, blocks from the diagonal of
/// the generic combination of `others` (the integrals without the
/// Hamiltonian) there. Throws PoleError when some g^{jj} vanishes at `point`.
FrameField coordinate_frame(const Metric& g, std::span<const QuadraticIntegral> others,
                            const CombinationSpec& lambda, const Eigen::VectorXd& point,
                            double tol);

/// coordinate_frame applied to a generated system.
FrameField frame_from_stackel(const StackelSystem& system, const CombinationSpec& lambda,
                              const Eigen::VectorXd& point, double tol);

using FrameMonomialCoeffs = std::map<ExpVec, double, GrlexLess>;

/// Numeric coefficients of P at `point` in the frame-momenta monomial basis
/// (substitutes p = R(point)^{-1} u for the frame-linear momenta u).
FrameMonomialCoeffs to_frame_momenta(const MomentaPolynomial& poly, const FrameField& frame,
                                     const Eigen::VectorXd& point);

/// The linear system A d = rhs on the directional derivatives d = v_s(rho_j)
/// produced by expanding {2H, I} (I = sum_j rho_j V_j) in frame momenta and
/// equating every cubic coefficient to zero. Rows follow `row_monomials`
/// (graded-lex); rows carrying exactly one unknown are normalized so that
/// unknown appears with coefficient one. Unknown (s, j) sits at column
/// s * m + j.
struct RhoSystem {
    Eigen::VectorXd point;
    std::vector<std::pair<int, int>> unknowns;
    std::vector<ExpVec> row_monomials;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    Eigen::VectorXd rho_values;

    int column(int s, int j) const;
    int row_of(const ExpVec& monomial) const;
};

RhoSystem build_rho_system(const Metric& g, const FrameField& frame, const BlockPartition& blocks,
                           const Eigen::VectorXd& rho_values, const Eigen::VectorXd& point);

struct RhoSolution {
    Eigen::VectorXd derivatives;
    double residual = 0.0;
    bool unique = false;
};

RhoSolution solve_rho_system(const RhoSystem& system);

/// Dimension bound for the space of integrals compatible with one frame
/// (the number of blocks m) plus the witness: the rho-vectors of the actual
/// integrals must be linearly independent at every sample point, forcing
/// n = m. Rank deficiency is surfaced as a counterexample, never hidden.
struct SolutionSpaceReport {
    int bound = 0;        // m
    int witness_rank = 0; // min over sample points
    bool n_equals_m = false;
    bool counterexample = false;
    std::string detail;
    std::vector<int> per_point_ranks;
};

SolutionSpaceReport solution_space_bound(const Metric& g,
                                         std::span<const QuadraticIntegral> integrals,
                                         const FrameField& frame,
                                         std::span<const Eigen::VectorXd> sample_points,
                                         double tol);

} // namespace stk
