#pragma once

#include "routh/reduction.hpp"

namespace routh {

/// The unique horizontal curve over x(t) through q_a (which must project to
/// x(0)). Sampled velocities drive an RK4 lift with cubic interpolation
/// between grid points.
std::vector<Vec> horizontal_lift_curve(const PrincipalConnection& conn, const QuotientChart& qc,
                                       const std::vector<double>& times,
                                       const std::vector<Vec>& x_samples,
                                       const std::vector<Vec>& vx_samples, const Vec& q_a);

enum class GroupOdeFrame {
    Spatial,  // gdot g^-1 = xi(t)
    Body      // g^-1 gdot = xi(t)
};

/// Solves the group reconstruction equation with g(t0) = e on the sample
/// grid. SO(3) uses RK4 on the matrix equation with per-step polar
/// re-orthonormalization; abelian kinds reduce to quadrature of xi.
std::vector<GroupElement> solve_group_ode(const LieGroup& group,
                                          const std::vector<double>& times,
                                          const std::vector<Vec>& xi_samples,
                                          GroupOdeFrame frame = GroupOdeFrame::Spatial);

/// Rebuilds the full trajectory over a reduced one: horizontal lift through
/// the caller-supplied anchor, then the group ODE, then the gauge assembly
/// q(t) = g(t) * q_h(t) (side-appropriate). The result carries E_L / J_L
/// channels and the projection residuals "res_y" / "res_xi" used to verify
/// that q(t) projects back onto the reduced curve.
Trajectory reconstruct(const ReducedSystem& rs, const Trajectory& reduced_traj, const Vec& q_a);

struct TrajectoryMetric {
    Vec weights;                // per-coordinate; empty = all ones
    std::vector<char> angular;  // per-coordinate; empty = none
};

struct ComparisonReport {
    double sup_error = 0.0;
    std::map<std::string, double> per_channel;
};

/// Supremum over the grid of the weighted coordinate distance; angular
/// channels are compared modulo 2 pi. Trajectories on different grids are
/// resampled onto the first grid by cubic interpolation.
ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b,
                                      const TrajectoryMetric& metric = {});

}  // namespace routh
