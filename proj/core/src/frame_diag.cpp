#include "stackel/frame_diag.hpp"

#include "stackel/errors.hpp"
#include "stackel/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace stk {

Eigen::MatrixXd evaluate_to_matrix(const FieldMatrix& m, const Eigen::VectorXd& point) {
    std::vector<double> p(point.data(), point.data() + point.size());
    std::vector<double> values = m.evaluate(p);
    Eigen::MatrixXd out(m.size(), m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            out(i, j) = values[static_cast<std::size_t>(i) * static_cast<std::size_t>(m.size()) +
                               static_cast<std::size_t>(j)];
    return out;
}

const char* diag_status_name(DiagStatus status) {
    switch (status) {
        case DiagStatus::Ok: return "OK";
        case DiagStatus::NonDiagonalizable: return "NON_DIAGONALIZABLE";
        case DiagStatus::VerificationFailed: return "VERIFICATION_FAILED";
    }
    return "?";
}

namespace {

void require_symmetric_numeric(const Eigen::MatrixXd& m, const char* what) {
    double scale = std::max(1.0, m.norm());
    if ((m - m.transpose()).norm() > 1e-9 * scale)
        throw std::invalid_argument(std::string(what) + " is not symmetric");
}

bool nearly_scalar(const Eigen::MatrixXd& r, double tol) {
    const auto k = r.rows();
    double mean = r.trace() / static_cast<double>(k);
    Eigen::MatrixXd dev = r - mean * Eigen::MatrixXd::Identity(k, k);
    return dev.norm() <= tol * (1.0 + r.norm());
}

struct SplitFailure {
    std::string detail;
};

// Recursively splits the invariant subspace spanned by the orthonormal
// columns of `w` into common eigenspaces of the operators. Leaves are
// returned in ascending order of the random-combination eigenvalues, which
// keeps the assembled frame deterministic for a fixed seed.
class Splitter {
public:
    Splitter(const std::vector<Eigen::MatrixXd>& ops, double tol, SeededRng& rng)
        : ops_(ops), tol_(tol), rng_(rng) {}

    bool run(const Eigen::MatrixXd& w, std::vector<Eigen::MatrixXd>& leaves) {
        const auto k = w.cols();
        if (k == 1) {
            leaves.push_back(w);
            return true;
        }
        std::vector<Eigen::MatrixXd> restricted;
        restricted.reserve(ops_.size());
        bool all_scalar = true;
        for (const Eigen::MatrixXd& op : ops_) {
            Eigen::MatrixXd r = w.transpose() * op * w;
            if (!nearly_scalar(r, std::max(tol_, 1e-10))) all_scalar = false;
            restricted.push_back(std::move(r));
        }
        if (all_scalar || restricted.empty()) {
            leaves.push_back(w);
            return true;
        }

        for (int attempt = 0; attempt < 4; ++attempt) {
            Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(k, k);
            for (const Eigen::MatrixXd& r : restricted)
                combo += to_double(rng_.rational(16, 8, /*nonzero=*/true)) * r;

            Eigen::EigenSolver<Eigen::MatrixXd> solver(combo);
            if (solver.info() != Eigen::Success) {
                failure_ = {"eigendecomposition did not converge"};
                continue;
            }
            Eigen::VectorXcd values = solver.eigenvalues();
            double scale = 1.0;
            for (int i = 0; i < values.size(); ++i)
                scale = std::max(scale, std::abs(values[i]));
            bool complex = false;
            for (int i = 0; i < values.size(); ++i)
                if (std::abs(values[i].imag()) > std::max(tol_, 1e-9) * scale) complex = true;
            if (complex) {
                failure_ = {"complex eigenvalues in the generic combination"};
                continue;
            }

            std::vector<double> real(values.size());
            for (int i = 0; i < values.size(); ++i) real[static_cast<std::size_t>(i)] = values[i].real();
            std::sort(real.begin(), real.end());
            double cluster_tol = std::max(tol_, 1e-9) * (1.0 + scale);
            std::vector<std::pair<double, int>> clusters; // representative, multiplicity
            for (double v : real) {
                if (!clusters.empty() && v - clusters.back().first <= cluster_tol) {
                    clusters.back().second += 1;
                } else {
                    clusters.emplace_back(v, 1);
                }
            }
            if (clusters.size() == 1 && !all_scalar) {
                failure_ = {"generic combination failed to separate a non-scalar family"};
                continue;
            }

            bool attempt_ok = true;
            std::vector<Eigen::MatrixXd> children;
            for (const auto& [mu, mult] : clusters) {
                Eigen::MatrixXd shifted = combo - mu * Eigen::MatrixXd::Identity(k, k);
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
                const Eigen::VectorXd& sv = svd.singularValues();
                double smax = std::max(sv.size() > 0 ? sv[0] : 0.0, 1.0);
                int null_dim = 0;
                for (int i = 0; i < sv.size(); ++i)
                    if (sv[i] <= std::max(tol_, 1e-10) * smax) ++null_dim;
                if (null_dim != mult) {
                    failure_ = {"defective eigenvalue cluster"};
                    attempt_ok = false;
                    break;
                }
                children.push_back(w * svd.matrixV().rightCols(mult));
            }
            if (!attempt_ok) continue;

            std::vector<Eigen::MatrixXd> collected;
            bool children_ok = true;
            for (const Eigen::MatrixXd& child : children) {
                if (!run(child, collected)) {
                    children_ok = false;
                    break;
                }
            }
            if (!children_ok) continue;
            leaves.insert(leaves.end(), collected.begin(), collected.end());
            return true;
        }
        if (failure_.detail.empty()) failure_ = {"could not split invariant subspace"};
        return false;
    }

    const SplitFailure& failure() const { return failure_; }

private:
    const std::vector<Eigen::MatrixXd>& ops_;
    double tol_;
    SeededRng& rng_;
    SplitFailure failure_;
};

} // namespace

DiagOutcome simultaneous_diagonalize(const Eigen::VectorXd& point, const Eigen::MatrixXd& g_at,
                                     const std::vector<Eigen::MatrixXd>& ks_at, double tol,
                                     std::uint64_t seed) {
    const auto n = g_at.rows();
    if (g_at.cols() != n) throw std::invalid_argument("metric matrix must be square");
    require_symmetric_numeric(g_at, "metric");
    for (const Eigen::MatrixXd& k : ks_at) {
        if (k.rows() != n || k.cols() != n)
            throw std::invalid_argument("integral matrix dimension mismatch");
        require_symmetric_numeric(k, "integral");
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(g_at);
    if (!lu.isInvertible()) throw SingularError("metric is singular at the point");
    Eigen::MatrixXd glow = lu.inverse();

    std::vector<Eigen::MatrixXd> ops;
    ops.reserve(ks_at.size());
    for (const Eigen::MatrixXd& k : ks_at) ops.push_back(k * glow);

    SeededRng rng(derive_seed(seed, 0xd1a60ULL));
    Splitter splitter(ops, tol, rng);
    std::vector<Eigen::MatrixXd> leaves;
    if (!splitter.run(Eigen::MatrixXd::Identity(n, n), leaves))
        return {DiagStatus::NonDiagonalizable, splitter.failure().detail, std::nullopt};

    // Orthonormalize each common eigenspace with respect to g and read off
    // the signs; +1 directions first within a block.
    PointFrame frame;
    frame.point = point;
    frame.basis = Eigen::MatrixXd::Zero(n, n);
    frame.signs.clear();
    int row = 0;
    for (const Eigen::MatrixXd& w : leaves) {
        Eigen::MatrixXd gram = w.transpose() * glow * w;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        if (es.info() != Eigen::Success)
            return {DiagStatus::NonDiagonalizable, "metric Gram eigendecomposition failed",
                    std::nullopt};
        Eigen::VectorXd d = es.eigenvalues();
        double dmax = std::max(1.0, d.cwiseAbs().maxCoeff());
        for (int i = 0; i < d.size(); ++i)
            if (std::abs(d[i]) <= std::max(tol, 1e-10) * dmax)
                return {DiagStatus::NonDiagonalizable,
                        "metric restriction to a common eigenspace is degenerate", std::nullopt};
        std::vector<int> order(static_cast<std::size_t>(d.size()));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return (d[a] > 0) > (d[b] > 0); // positive signs first
        });
        for (int idx : order) {
            Eigen::VectorXd column = w * es.eigenvectors().col(idx) / std::sqrt(std::abs(d[idx]));
            frame.basis.row(row) = column.transpose();
            frame.signs.push_back(d[idx] > 0 ? 1 : -1);
            ++row;
        }
    }

    // Verify: every tensor must be diagonal in the frame, the metric must be
    // diag(signs).
    Eigen::MatrixXd r = frame.basis;
    Eigen::MatrixXd metric_frame = r * glow * r.transpose();
    Eigen::VectorXd signs_vec(n);
    for (int i = 0; i < n; ++i) signs_vec[i] = static_cast<double>(frame.signs[static_cast<std::size_t>(i)]);
    if ((metric_frame - signs_vec.asDiagonal().toDenseMatrix()).norm() >
        std::max(tol, 1e-9) * std::max(1.0, metric_frame.norm()))
        return {DiagStatus::VerificationFailed, "metric is not diag(+-1) in the frame", std::nullopt};

    frame.diagonals.clear();
    for (std::size_t a = 0; a < ks_at.size(); ++a) {
        Eigen::MatrixXd m = r * glow * ks_at[a] * glow * r.transpose();
        double norm = m.norm();
        double offdiag = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) offdiag = std::max(offdiag, std::abs(m(i, j)));
        if (offdiag > tol * std::max(norm, 1e-12)) {
            std::ostringstream detail;
            detail << "tensor " << a + 1 << " off-diagonal residual " << offdiag
                   << " exceeds tolerance";
            return {DiagStatus::VerificationFailed, detail.str(), std::nullopt};
        }
        frame.diagonals.push_back(m.diagonal());
    }

    DiagOutcome outcome;
    outcome.status = DiagStatus::Ok;
    outcome.frame = std::move(frame);
    return outcome;
}

BlockPartition block_partition(const PointFrame& frame, const Eigen::VectorXd& combo_diag,
                               double tol) {
    const auto n = combo_diag.size();
    if (frame.basis.rows() != n) throw std::invalid_argument("frame/diagonal size mismatch");
    double scale = 1.0 + (n > 0 ? combo_diag.cwiseAbs().maxCoeff() : 0.0);
    double threshold = tol * scale;

    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(combo_diag[i] - combo_diag[j]) <= threshold) {
                int ri = find(i), rj = find(j);
                if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
            }

    BlockPartition partition;
    partition.assignment.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        int root = find(i);
        if (partition.assignment[static_cast<std::size_t>(root)] == -1) {
            partition.assignment[static_cast<std::size_t>(root)] = partition.m;
            partition.sizes.push_back(0);
            partition.m += 1;
        }
        partition.assignment[static_cast<std::size_t>(i)] =
            partition.assignment[static_cast<std::size_t>(root)];
        partition.sizes[static_cast<std::size_t>(
            partition.assignment[static_cast<std::size_t>(i)])] += 1;
    }
    return partition;
}

int restriction_rank(const PointFrame& frame) {
    if (frame.diagonals.empty()) return 0;
    const auto n = frame.diagonals.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(frame.diagonals.size()), n);
    for (std::size_t a = 0; a < frame.diagonals.size(); ++a)
        m.row(static_cast<Eigen::Index>(a)) = frame.diagonals[a].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-9 * sv[0]) ++rank;
    return rank;
}

DiagonalizationReport diagonalization_report(const Eigen::VectorXd& point,
                                             const Eigen::MatrixXd& g_at,
                                             const std::vector<Eigen::MatrixXd>& ks_at,
                                             const Eigen::MatrixXd& combo_at, double tol,
                                             std::uint64_t seed) {
    DiagonalizationReport report;
    report.outcome = simultaneous_diagonalize(point, g_at, ks_at, tol, seed);
    EigenvalueGapReport gaps = distinct_eigenvalue_check(g_at, combo_at, tol);
    report.min_eigen_gap = gaps.min_gap;
    if (!report.outcome.ok()) return report;

    const PointFrame& frame = *report.outcome.frame;
    Eigen::MatrixXd glow = g_at.inverse();
    Eigen::MatrixXd combo_frame = frame.basis * glow * combo_at * glow * frame.basis.transpose();
    // The frame diagonal carries a sign; the coefficient functions grouped by
    // the partition are sign * diagonal.
    Eigen::VectorXd rho = combo_frame.diagonal();
    for (int s = 0; s < rho.size(); ++s) rho[s] *= frame.signs[static_cast<std::size_t>(s)];
    report.partition = block_partition(frame, rho, tol);
    report.restriction_rank = stk::restriction_rank(frame);
    return report;
}

EigenvalueGapReport distinct_eigenvalue_check(const Eigen::MatrixXd& g_at,
                                              const Eigen::MatrixXd& k_at, double tol) {
    EigenvalueGapReport report;
    require_symmetric_numeric(k_at, "integral");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g_at);
    if (!lu.isInvertible()) throw SingularError("metric is singular at the point");
    Eigen::MatrixXd l = k_at * lu.inverse();

    Eigen::EigenSolver<Eigen::MatrixXd> solver(l);
    if (solver.info() != Eigen::Success) {
        report.reason = "eigendecomposition did not converge";
        return report;
    }
    Eigen::VectorXcd values = solver.eigenvalues();
    double scale = 1.0;
    for (int i = 0; i < values.size(); ++i) scale = std::max(scale, std::abs(values[i]));
    for (int i = 0; i < values.size(); ++i) {
        if (std::abs(values[i].imag()) > 1e-9 * scale) {
            report.reason = "complex eigenvalues";
            return report;
        }
    }
    std::vector<double> real(static_cast<std::size_t>(values.size()));
    for (int i = 0; i < values.size(); ++i) real[static_cast<std::size_t>(i)] = values[i].real();
    std::sort(real.begin(), real.end());
    report.eigenvalues = real;
    if (real.size() < 2) {
        report.distinct = true;
        report.min_gap = std::numeric_limits<double>::infinity();
        return report;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < real.size(); ++i) gap = std::min(gap, real[i] - real[i - 1]);
    report.min_gap = gap;
    report.distinct = gap > tol;
    return report;
}

} // namespace stk
