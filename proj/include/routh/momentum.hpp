#pragma once

#include <random>

#include "routh/group.hpp"
#include "routh/lagrangian.hpp"

namespace routh {

using StateSampler = std::function<ChartState(std::mt19937_64&)>;

/// J_L(v_q)(xi) = d/de L(v_q + e xi_Q(q)), one component per algebra basis
/// element. Uses analytic dL/dv when registered.
Vec momentum_map(const LagrangianSystem& sys, const GroupAction& action, const ChartState& s);

struct InvarianceReport {
    bool L_invariant = false;
    bool F_cond1 = false;  // <F(vg), wg> = <F(v), w>
    bool F_cond2 = false;  // <F(v), xi_Q> = 0
    double max_L_violation = 0.0;
    double max_F1_violation = 0.0;
    double max_F2_violation = 0.0;
    bool all() const { return L_invariant && F_cond1 && F_cond2; }
};

/// Samples (g, state) pairs and checks invariance of L and the two force
/// conditions; threshold 1e-8.
InvarianceReport check_invariance(const LagrangianSystem& sys, const GroupAction& action,
                                  const StateSampler& sampler, int n_samples = 20,
                                  std::uint64_t seed = 0, double tol = 1e-8);

/// Per-component max |J_L(t) - J_L(0)| of the trajectory's J_L channel.
Vec momentum_drift(const Trajectory& traj);

/// The locked inertia tensor at s: I(xi)(eta) = d/dtau J_L(v + tau eta_Q)(xi).
Mat locked_inertia(const LagrangianSystem& sys, const GroupAction& action, const ChartState& s);

/// Orthonormal basis (columns) of g_mu = { xi : ad*_xi mu = 0 }, via SVD with
/// singular values below 1e-10 * max treated as zero.
Mat isotropy_subalgebra(const LieGroup& group, const Vec& mu);

/// Adjusts the vertical velocity component so that J_L(s) = mu; Newton on the
/// generator directions (one step for velocity-quadratic Lagrangians).
ChartState project_to_momentum(const LagrangianSystem& sys, const GroupAction& action,
                               const ChartState& s, const Vec& mu, int max_iter = 20);

}  // namespace routh
