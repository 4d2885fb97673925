#pragma once

#include "stackel/tensor_field.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stk {

/// Entries of a symbolic matrix evaluated at a point.
Eigen::MatrixXd evaluate_to_matrix(const FieldMatrix& m, const Eigen::VectorXd& point);

/// A diagonalizing basis of one tangent space. Rows of `basis` are the frame
/// vectors; `diagonals[a]` holds the frame components of the a-th input
/// tensor (conjugated lowered tensor is diagonal); the metric itself becomes
/// diag(signs) after the rescaling.
struct PointFrame {
    Eigen::VectorXd point;
    Eigen::MatrixXd basis;
    std::vector<Eigen::VectorXd> diagonals;
    std::vector<int> signs;
};

/// Grouping of frame directions on which a generic combination's diagonal
/// entries coincide: m blocks of sizes k_1..k_m summing to n, ordered by
/// first occurrence.
struct BlockPartition {
    int m = 0;
    std::vector<int> sizes;
    std::vector<int> assignment; // frame index -> block index

    bool operator==(const BlockPartition& other) const {
        return m == other.m && sizes == other.sizes && assignment == other.assignment;
    }
};

enum class DiagStatus { Ok, NonDiagonalizable, VerificationFailed };

const char* diag_status_name(DiagStatus status);

struct DiagOutcome {
    DiagStatus status = DiagStatus::Ok;
    std::string detail;
    std::optional<PointFrame> frame;

    bool ok() const { return status == DiagStatus::Ok; }
};

/// Attempts a common diagonalizing frame for the symmetric tensors `ks_at`
/// with respect to the metric `g_at` (inverse components) at one point.
/// Random combinations are drawn from `seed`; three retries before failing.
DiagOutcome simultaneous_diagonalize(const Eigen::VectorXd& point, const Eigen::MatrixXd& g_at,
                                     const std::vector<Eigen::MatrixXd>& ks_at, double tol,
                                     std::uint64_t seed = 0);

/// Groups frame indices whose combination diagonal entries agree within
/// tol * (1 + max |entry|).
BlockPartition block_partition(const PointFrame& frame, const Eigen::VectorXd& combo_diag,
                               double tol);

/// Rank of the matrix whose rows are the integrals' frame diagonals
/// (singular values above 1e-9 * sigma_max). The frame must have been
/// produced from all n integrals, the Hamiltonian included.
int restriction_rank(const PointFrame& frame);

struct EigenvalueGapReport {
    bool distinct = false;
    double min_gap = 0.0;
    std::string reason;
    std::vector<double> eigenvalues;
};

/// Eigenvalues of K g_lower: all real and pairwise farther apart than tol?
EigenvalueGapReport distinct_eigenvalue_check(const Eigen::MatrixXd& g_at,
                                              const Eigen::MatrixXd& k_at, double tol);

/// One-point summary: frame (or failure), block partition of the generic
/// combination, restriction rank and the combination's eigenvalue gap.
struct DiagonalizationReport {
    DiagOutcome outcome;
    BlockPartition partition;
    int restriction_rank = 0;
    double min_eigen_gap = 0.0;
};

/// Runs the full pointwise pipeline: diagonalize all `ks_at` against `g_at`,
/// partition by the frame diagonal of `combo_at`, measure the restriction
/// rank and the combination's eigenvalue gaps.
DiagonalizationReport diagonalization_report(const Eigen::VectorXd& point,
                                             const Eigen::MatrixXd& g_at,
                                             const std::vector<Eigen::MatrixXd>& ks_at,
                                             const Eigen::MatrixXd& combo_at, double tol,
                                             std::uint64_t seed = 0);

} // namespace stk
