#include "stackel/geodesic_flow.hpp"

#include "stackel/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace stk {

HamiltonianFlow::HamiltonianFlow(MomentaPolynomial hamiltonian) : h_(std::move(hamiltonian)) {
    const int n = dimension();
    dh_dq_.reserve(static_cast<std::size_t>(n));
    dh_dp_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        dh_dq_.push_back(h_.partial_position(i));
        dh_dp_.push_back(h_.partial_momentum(i));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            hqq_.push_back(dh_dq_[static_cast<std::size_t>(i)].partial_position(j));
            hqp_.push_back(dh_dq_[static_cast<std::size_t>(i)].partial_momentum(j));
            hpp_.push_back(dh_dp_[static_cast<std::size_t>(i)].partial_momentum(j));
        }
    }
}

std::pair<std::vector<double>, std::vector<double>> HamiltonianFlow::vector_field(
    const PhaseState& s) const {
    const int n = dimension();
    std::vector<double> dq(static_cast<std::size_t>(n)), dp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        dq[static_cast<std::size_t>(i)] = dh_dp_[static_cast<std::size_t>(i)].evaluate(s);
        dp[static_cast<std::size_t>(i)] = -dh_dq_[static_cast<std::size_t>(i)].evaluate(s);
    }
    return {std::move(dq), std::move(dp)};
}

PhaseState HamiltonianFlow::midpoint_step(const PhaseState& s, double dt, double newton_tol,
                                          int max_iter) const {
    const int n = dimension();
    if (dt == 0.0) return s;

    auto field_at = [&](const Eigen::VectorXd& z) {
        PhaseState state;
        state.position.assign(z.data(), z.data() + n);
        state.momentum.assign(z.data() + n, z.data() + 2 * n);
        auto [dq, dp] = vector_field(state);
        Eigen::VectorXd x(2 * n);
        for (int i = 0; i < n; ++i) {
            x[i] = dq[static_cast<std::size_t>(i)];
            x[n + i] = dp[static_cast<std::size_t>(i)];
        }
        return x;
    };

    Eigen::VectorXd z0(2 * n);
    for (int i = 0; i < n; ++i) {
        z0[i] = s.position[static_cast<std::size_t>(i)];
        z0[n + i] = s.momentum[static_cast<std::size_t>(i)];
    }

    // Explicit Euler predictor.
    Eigen::VectorXd z = z0 + dt * field_at(z0);
    double scale = 1.0 + z0.cwiseAbs().maxCoeff();

    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::VectorXd mid = 0.5 * (z0 + z);
        Eigen::VectorXd residual = z - z0 - dt * field_at(mid);

        PhaseState mid_state;
        mid_state.position.assign(mid.data(), mid.data() + n);
        mid_state.momentum.assign(mid.data() + n, mid.data() + 2 * n);

        // J = I - (dt/2) DX(mid),  DX = [[Hpq, Hpp], [-Hqq, -Hqp]].
        Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(2 * n, 2 * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double hqp = hqp_[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(i)]
                                 .evaluate(mid_state); // d2H/dp_i dq_j
                double hpp = hpp_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(j)]
                                 .evaluate(mid_state);
                double hqq = hqq_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(j)]
                                 .evaluate(mid_state);
                double hqp_t = hqp_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                    static_cast<std::size_t>(j)]
                                   .evaluate(mid_state);
                jac(i, j) -= 0.5 * dt * hqp;
                jac(i, n + j) -= 0.5 * dt * hpp;
                jac(n + i, j) -= 0.5 * dt * (-hqq);
                jac(n + i, n + j) -= 0.5 * dt * (-hqp_t);
            }
        }

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        Eigen::VectorXd delta = lu.solve(-residual);
        if (!delta.allFinite()) {
            // Fixed-point fallback for an unreliable Jacobian solve.
            delta = -(residual);
        }
        z += delta;
        if (delta.cwiseAbs().maxCoeff() <= newton_tol * scale) {
            PhaseState next;
            next.position.assign(z.data(), z.data() + n);
            next.momentum.assign(z.data() + n, z.data() + 2 * n);
            return next;
        }
    }
    throw ConvergenceError("implicit midpoint Newton iteration did not converge");
}

std::pair<Trajectory, DriftReport> HamiltonianFlow::integrate(const PhaseState& start, double dt,
                                                              long steps,
                                                              std::span<const Monitor> monitors,
                                                              double newton_tol,
                                                              int max_iter) const {
    if (steps < 1) throw std::invalid_argument("need at least one step");
    Trajectory trajectory;
    trajectory.dt = dt;
    trajectory.times.reserve(static_cast<std::size_t>(steps) + 1);
    trajectory.states.reserve(static_cast<std::size_t>(steps) + 1);
    trajectory.times.push_back(0.0);
    trajectory.states.push_back(start);

    DriftReport report;
    std::vector<double> initial;
    for (const Monitor& monitor : monitors) {
        double value = monitor.poly.evaluate(start);
        initial.push_back(value);
        report.entries.push_back({monitor.label, value, 0.0, 0.0});
    }

    PhaseState state = start;
    for (long step = 0; step < steps; ++step) {
        try {
            state = midpoint_step(state, dt, newton_tol, max_iter);
        } catch (const std::exception& e) {
            throw FlowError(e.what(), step);
        }
        trajectory.times.push_back(dt * static_cast<double>(step + 1));
        trajectory.states.push_back(state);
        for (std::size_t k = 0; k < report.entries.size(); ++k) {
            double value;
            try {
                value = monitors[k].poly.evaluate(state);
            } catch (const std::exception& e) {
                throw FlowError(e.what(), step);
            }
            report.entries[k].max_abs_drift =
                std::max(report.entries[k].max_abs_drift, std::abs(value - initial[k]));
        }
    }
    for (DriftEntry& entry : report.entries)
        entry.relative_drift = entry.max_abs_drift / std::max(1.0, std::abs(entry.initial_value));
    return {std::move(trajectory), std::move(report)};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::span<const Monitor> monitors) {
    if (trajectory.states.empty()) return;
    const std::size_t n = trajectory.states.front().position.size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",p" << i;
    for (std::size_t k = 1; k <= monitors.size(); ++k) out << ",I" << k;
    out << "\n";
    char buffer[64];
    auto put = [&](double value) {
        std::snprintf(buffer, sizeof buffer, "%.17g", value);
        out << buffer;
    };
    for (std::size_t row = 0; row < trajectory.states.size(); ++row) {
        put(trajectory.times[row]);
        const PhaseState& s = trajectory.states[row];
        for (double x : s.position) {
            out << ",";
            put(x);
        }
        for (double p : s.momentum) {
            out << ",";
            put(p);
        }
        for (const Monitor& monitor : monitors) {
            out << ",";
            put(monitor.poly.evaluate(s));
        }
        out << "\n";
    }
}

} // namespace stk
