#pragma once

#include "stackel/phase_poly.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stk {

struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<PhaseState> states;
};

/// A quantity watched along a trajectory.
struct Monitor {
    std::string label;
    MomentaPolynomial poly;
};

struct DriftEntry {
    std::string label;
    double initial_value = 0.0;
    double max_abs_drift = 0.0;
    double relative_drift = 0.0; // max drift / max(1, |initial|)
};

struct DriftReport {
    std::vector<DriftEntry> entries;
};

/// Hamiltonian flow with an implicit midpoint stepper. The method is
/// symmetric and symplectic, and exact for constant-coefficient quadratic
/// Hamiltonians; Newton corrections use the analytic Jacobian assembled from
/// second partials of H, with a fixed-point fallback when the linear solve
/// is unreliable.
class HamiltonianFlow {
public:
    explicit HamiltonianFlow(MomentaPolynomial hamiltonian);

    const MomentaPolynomial& hamiltonian() const noexcept { return h_; }
    int dimension() const noexcept { return h_.chart().dimension(); }

    /// dx/dt = dH/dp, dp/dt = -dH/dx at the state.
    std::pair<std::vector<double>, std::vector<double>> vector_field(const PhaseState& s) const;

    /// One implicit midpoint step; dt = 0 returns the state unchanged.
    PhaseState midpoint_step(const PhaseState& s, double dt, double newton_tol = 1e-12,
                             int max_iter = 50) const;

    /// `steps` midpoint steps with per-state monitor tracking. Step errors
    /// (poles, non-convergence) are rethrown as FlowError with the index.
    std::pair<Trajectory, DriftReport> integrate(const PhaseState& start, double dt, long steps,
                                                 std::span<const Monitor> monitors,
                                                 double newton_tol = 1e-12,
                                                 int max_iter = 50) const;

private:
    MomentaPolynomial h_;
    std::vector<MomentaPolynomial> dh_dq_, dh_dp_;
    // Second partials for the Newton Jacobian, row-major n x n blocks.
    std::vector<MomentaPolynomial> hqq_, hqp_, hpp_;
};

/// CSV export: header t,x1..xn,p1..pn,I1..Ik with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          std::span<const Monitor> monitors);

} // namespace stk
