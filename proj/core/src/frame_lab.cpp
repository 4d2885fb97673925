#include "stackel/frame_lab.hpp"

#include "stackel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace stk {

namespace {

std::vector<ExpVec> degree3_monomials(int n) {
    std::vector<ExpVec> out;
    ExpVec e(static_cast<std::size_t>(n), 0);
    // All exponent vectors of total degree 3.
    std::function<void(int, int)> rec = [&](int var, int remaining) {
        if (var == n - 1) {
            e[static_cast<std::size_t>(var)] = static_cast<std::uint32_t>(remaining);
            out.push_back(e);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[static_cast<std::size_t>(var)] = static_cast<std::uint32_t>(k);
            rec(var + 1, remaining - k);
        }
    };
    rec(0, 3);
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

} // namespace

Eigen::MatrixXd FrameField::evaluate(const Eigen::VectorXd& point) const {
    const int n = dimension();
    std::vector<double> p(point.data(), point.data() + point.size());
    Eigen::MatrixXd out(n, n);
    for (int s = 0; s < n; ++s)
        for (int k = 0; k < n; ++k)
            out(s, k) = rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)].evaluate(p);
    return out;
}

MomentaPolynomial FrameField::row_linear_form(int s) const {
    const int n = dimension();
    Backend backend = rows.front().front().backend();
    MomentaPolynomial form(chart, backend);
    ExpVec e(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
        std::fill(e.begin(), e.end(), 0U);
        e[static_cast<std::size_t>(k)] = 1;
        form.add_term(e, rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)]);
    }
    return form;
}

MomentaPolynomial FrameField::block_quadratic(int block) const {
    Backend backend = rows.front().front().backend();
    MomentaPolynomial v(chart, backend);
    for (int s = 0; s < dimension(); ++s) {
        if (blocks.assignment[static_cast<std::size_t>(s)] != block) continue;
        MomentaPolynomial linear = row_linear_form(s);
        MomentaPolynomial square = linear * linear;
        if (signs[static_cast<std::size_t>(s)] < 0) square = square.scaled(Rational(-1));
        v = v + square;
    }
    return v;
}

FrameField coordinate_frame(const Metric& g, std::span<const QuadraticIntegral> others,
                            const CombinationSpec& lambda, const Eigen::VectorXd& point,
                            double tol) {
    const int n = g.dimension();
    const Chart& chart = g.chart();
    if (point.size() != n) throw std::invalid_argument("point dimension");
    std::vector<double> p(point.data(), point.data() + point.size());

    FrameField frame;
    frame.chart = chart;
    frame.rows.assign(static_cast<std::size_t>(n),
                      std::vector<ScalarField>(static_cast<std::size_t>(n),
                                               ScalarField::zero(chart, Backend::Numeric)));
    frame.signs.resize(static_cast<std::size_t>(n));

    for (int j = 0; j < n; ++j) {
        const ScalarField& gjj = g.inverse_components().at(j, j);
        double value = gjj.evaluate(p);
        if (std::abs(value) <= tol)
            throw PoleError("g^{" + std::to_string(j + 1) + std::to_string(j + 1) +
                            "} vanishes at the requested point");
        int sign = value > 0 ? 1 : -1;
        frame.signs[static_cast<std::size_t>(j)] = sign;
        // v_j = sqrt(sign * g^{jj}) d/dx_j, valid near the point.
        ScalarField scaled = sign > 0 ? gjj.to_numeric() : (-gjj).to_numeric();
        ScalarField row_entry(chart, Expr::call(UnaryFn::Sqrt, scaled.tree()));
        frame.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = row_entry;
    }

    // Blocks come from the generic combination's diagonal in the frame,
    // which for a diagonal system is (sum_a lambda_a K_a^{jj}) / g^{jj}.
    Eigen::VectorXd combo_diag = Eigen::VectorXd::Zero(n);
    if (!others.empty()) {
        if (lambda.coefficients.size() != others.size())
            throw std::invalid_argument("combination length mismatch");
        for (int j = 0; j < n; ++j) {
            double gjj = g.inverse_components().at(j, j).evaluate(p);
            double sum = 0.0;
            for (std::size_t a = 0; a < others.size(); ++a) {
                double kjj = others[a].components.at(j, j).evaluate(p);
                sum += to_double(lambda.coefficients[a]) * kjj;
            }
            combo_diag[j] = sum / gjj;
        }
    }
    PointFrame at_point;
    at_point.point = point;
    at_point.basis = frame.evaluate(point);
    frame.blocks = block_partition(at_point, combo_diag, tol);
    return frame;
}

FrameField frame_from_stackel(const StackelSystem& system, const CombinationSpec& lambda,
                              const Eigen::VectorXd& point, double tol) {
    std::span<const QuadraticIntegral> all(system.integrals);
    return coordinate_frame(system.metric, all.subspan(1), lambda, point, tol);
}

FrameMonomialCoeffs to_frame_momenta(const MomentaPolynomial& poly, const FrameField& frame,
                                     const Eigen::VectorXd& point) {
    const int n = frame.dimension();
    if (poly.chart() != frame.chart) throw MixedOperandError("polynomial/frame chart mismatch");
    Eigen::MatrixXd r = frame.evaluate(point);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
    if (!lu.isInvertible()) throw SingularError("frame matrix is singular at the point");
    Eigen::MatrixXd rinv = lu.inverse();

    std::vector<double> p(point.data(), point.data() + point.size());
    FrameMonomialCoeffs out;
    ExpVec unit(static_cast<std::size_t>(n), 0);
    for (const auto& [e, coeff] : poly.terms()) {
        double value = coeff.evaluate(p);
        // Expand value * prod_k (sum_t rinv(k,t) u_t)^(e_k).
        FrameMonomialCoeffs acc;
        acc.emplace(ExpVec(static_cast<std::size_t>(n), 0), value);
        for (int k = 0; k < n; ++k) {
            for (std::uint32_t rep = 0; rep < e[static_cast<std::size_t>(k)]; ++rep) {
                FrameMonomialCoeffs next;
                for (const auto& [ea, ca] : acc) {
                    for (int t = 0; t < n; ++t) {
                        double w = rinv(k, t);
                        if (w == 0.0) continue;
                        ExpVec eb = ea;
                        eb[static_cast<std::size_t>(t)] += 1;
                        next[eb] += ca * w;
                    }
                }
                acc = std::move(next);
            }
        }
        for (const auto& [em, cm] : acc) out[em] += cm;
    }
    // Drop numerically-dead entries so reports stay tidy.
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == 0.0)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

int RhoSystem::column(int s, int j) const {
    const int m = static_cast<int>(rho_values.size());
    return s * m + j;
}

int RhoSystem::row_of(const ExpVec& monomial) const {
    for (std::size_t r = 0; r < row_monomials.size(); ++r)
        if (row_monomials[r] == monomial) return static_cast<int>(r);
    return -1;
}

RhoSystem build_rho_system(const Metric& g, const FrameField& frame, const BlockPartition& blocks,
                           const Eigen::VectorXd& rho_values, const Eigen::VectorXd& point) {
    const int n = frame.dimension();
    if (g.dimension() != n) throw std::invalid_argument("metric/frame dimension mismatch");
    if (!(frame.blocks == blocks)) throw std::invalid_argument("inconsistent blocks");
    const int m = blocks.m;
    if (rho_values.size() != m) throw std::invalid_argument("rho value count must equal m");

    RhoSystem system;
    system.point = point;
    system.rho_values = rho_values;
    system.row_monomials = degree3_monomials(n);
    for (int s = 0; s < n; ++s)
        for (int j = 0; j < m; ++j) system.unknowns.emplace_back(s, j);

    const int rows = static_cast<int>(system.row_monomials.size());
    system.matrix = Eigen::MatrixXd::Zero(rows, n * m);
    system.rhs = Eigen::VectorXd::Zero(rows);

    // Unknown part: {V_i, rho_j} V_j contributes 2 eps_s eps_t v_s(rho_j)
    // on the monomial u_s u_t^2 for every t in block j.
    for (int j = 0; j < m; ++j) {
        for (int t = 0; t < n; ++t) {
            if (blocks.assignment[static_cast<std::size_t>(t)] != j) continue;
            for (int s = 0; s < n; ++s) {
                ExpVec mono(static_cast<std::size_t>(n), 0);
                mono[static_cast<std::size_t>(s)] += 1;
                mono[static_cast<std::size_t>(t)] += 2;
                int row = system.row_of(mono);
                double eps = static_cast<double>(frame.signs[static_cast<std::size_t>(s)] *
                                                 frame.signs[static_cast<std::size_t>(t)]);
                system.matrix(row, system.column(s, j)) += 2.0 * eps;
            }
        }
    }

    // Known part: rho_j {2H, V_j} moves to the right-hand side.
    MomentaPolynomial twice_h = frame.block_quadratic(0);
    for (int j = 1; j < m; ++j) twice_h = twice_h + frame.block_quadratic(j);
    for (int j = 0; j < m; ++j) {
        MomentaPolynomial bracket = poisson_bracket(twice_h, frame.block_quadratic(j));
        FrameMonomialCoeffs coeffs = to_frame_momenta(bracket, frame, point);
        for (const auto& [mono, value] : coeffs) {
            int row = system.row_of(mono);
            if (row < 0) continue; // brackets of quadratics are cubic; guard anyway
            system.rhs(row) -= rho_values[j] * value;
        }
    }

    // Rows carrying exactly one unknown are scaled so it has coefficient 1.
    for (int r = 0; r < rows; ++r) {
        int nonzero = -1;
        int count = 0;
        for (int c = 0; c < system.matrix.cols(); ++c) {
            if (system.matrix(r, c) != 0.0) {
                nonzero = c;
                ++count;
            }
        }
        if (count == 1) {
            double pivot = system.matrix(r, nonzero);
            system.matrix.row(r) /= pivot;
            system.rhs(r) /= pivot;
        }
    }
    return system;
}

RhoSolution solve_rho_system(const RhoSystem& system) {
    RhoSolution solution;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system.matrix);
    qr.setThreshold(1e-10);
    solution.unique = qr.rank() == system.matrix.cols();
    solution.derivatives = qr.solve(system.rhs);
    solution.residual =
        (system.matrix * solution.derivatives - system.rhs).cwiseAbs().maxCoeff();
    return solution;
}

SolutionSpaceReport solution_space_bound(const Metric& g,
                                         std::span<const QuadraticIntegral> integrals,
                                         const FrameField& frame,
                                         std::span<const Eigen::VectorXd> sample_points,
                                         double tol) {
    const int n = frame.dimension();
    const int m = frame.blocks.m;
    SolutionSpaceReport report;
    report.bound = m;
    report.witness_rank = static_cast<int>(integrals.size());
    if (sample_points.empty()) throw std::invalid_argument("need at least one sample point");

    std::ostringstream detail;
    for (std::size_t pi = 0; pi < sample_points.size(); ++pi) {
        const Eigen::VectorXd& point = sample_points[pi];
        Eigen::MatrixXd r = frame.evaluate(point);
        Eigen::MatrixXd g_at = evaluate_to_matrix(g.inverse_components(), point);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(g_at);
        if (!lu.isInvertible()) throw SingularError("metric singular at a sample point");
        Eigen::MatrixXd glow = lu.inverse();

        Eigen::MatrixXd rho(static_cast<Eigen::Index>(integrals.size()), m);
        for (std::size_t a = 0; a < integrals.size(); ++a) {
            Eigen::MatrixXd k_at = evaluate_to_matrix(integrals[a].components, point);
            Eigen::MatrixXd mframe = r * glow * k_at * glow * r.transpose();
            // Collapse frame directions to blocks; entries must agree within
            // each block.
            for (int j = 0; j < m; ++j) {
                double sum = 0.0;
                double lo = 0.0, hi = 0.0;
                bool first = true;
                int count = 0;
                for (int s = 0; s < n; ++s) {
                    if (frame.blocks.assignment[static_cast<std::size_t>(s)] != j) continue;
                    double value = frame.signs[static_cast<std::size_t>(s)] * mframe(s, s);
                    sum += value;
                    if (first || value < lo) lo = value;
                    if (first || value > hi) hi = value;
                    first = false;
                    ++count;
                }
                double mean = sum / count;
                if (hi - lo > tol * (1.0 + std::abs(mean)))
                    detail << "integral " << integrals[a].label << " not block-constant at point "
                           << pi << "; ";
                rho(static_cast<Eigen::Index>(a), j) = mean;
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rho);
        const Eigen::VectorXd& sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv[0] > 0.0 && sv[i] > 1e-9 * sv[0]) ++rank;
        report.per_point_ranks.push_back(rank);
        report.witness_rank = std::min(report.witness_rank, rank);
        if (rank < static_cast<int>(integrals.size()))
            detail << "rho-vectors rank " << rank << " < " << integrals.size() << " at point "
                   << pi << "; ";
    }
    report.counterexample = report.witness_rank < static_cast<int>(integrals.size());
    report.n_equals_m =
        !report.counterexample && m == static_cast<int>(integrals.size());
    report.detail = detail.str();
    return report;
}

} // namespace stk
