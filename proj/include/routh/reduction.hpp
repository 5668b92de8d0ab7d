#pragma once

#include "routh/fibred.hpp"
#include "routh/routhian.hpp"

namespace routh {

/// The Routh-reduced intrinsically constrained system living on
/// T(Q/G) x Q/G_mu x g-tilde, in one trivialization. Forces: the reduced
/// invariant force f (base covector) plus the gyroscopic force of beta^mu.
struct ReducedSystem {
    SystemPtr full;
    PrincipalConnection conn;
    QuotientChart qchart;
    Vec mu;
    Mat g_mu_basis;          // columns span g_mu
    ChartPtr reduced_chart;  // coordinates x ++ y (trajectory chart)
    ChartPtr fibred_chart;   // coordinates x ++ y ++ xi (total chart of the fibred view)
    StateSampler full_sampler;  // samples of full states, used by numeric classifiers

    const GroupAction& action() const { return conn.action; }
    int n() const { return qchart.n(); }
    int k() const { return qchart.k(); }
    int gdim() const { return conn.action.group.dim; }

    /// Full state over the section representative (identity gauge).
    ChartState lift(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const;

    /// The reduced Routhian: R^mu evaluated through the trivialization.
    double R_mu(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const;

    /// d R_mu / d vx, evaluated exactly through the lift (envelope-free form).
    Vec dR_dvx(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const;

    /// Reduced momentum j_l; <j_l(vx, xi), e_a> in class components.
    Vec j_l(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const;

    /// mu-tilde(y) in class components.
    Vec mu_tilde_at(const Vec& x, const Vec& y) const;

    /// Reduced force f on base covectors.
    Vec f_reduced(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const;

    /// beta^mu as coordinate matrix on (x, y), and its block form.
    Mat beta_matrix(const Vec& x, const Vec& y) const;
    BetaBlocks beta_blocks(const Vec& x, const Vec& y) const;

    /// The fibred-system view over Q/G with fibre (y, xi): Lagrangian R_mu
    /// plus the combined force. This is what the generic constraint machinery
    /// (classification, residuals, presymplectic analysis) consumes.
    FibredSystem fibred() const;

    /// Deterministic sampler of reduced points (projections of full samples).
    ReducedPoint sample_point(std::mt19937_64& rng) const;
};

struct ReduceOptions {
    bool run_invariance_check = true;
    bool assume_mu_regular = false;
    int invariance_samples = 12;
    std::uint64_t seed = 0;
};

/// Builds the Routh-reduced system. Verifies invariance of (L, F) and, unless
/// asserted by the caller, that the locked inertia has full rank somewhere
/// (the implementable proxy for mu being a regular value).
ReducedSystem reduce(SystemPtr sys, const PrincipalConnection& conn, const QuotientChart& qchart,
                     Vec mu, StateSampler full_sampler, const ReduceOptions& opts = {});

struct GRegularityReport {
    bool is_regular = false;
    double worst_condition = 0.0;
};

/// G-regularity: the xi-Hessian of the reduced Lagrangian must be invertible
/// at sampled points (min singular value > 1e-8 * max).
GRegularityReport g_regularity_test(const ReducedSystem& rs, int n_samples = 20,
                                    std::uint64_t seed = 0);

/// Newton inversion of j_l(vx, .) = target. Residual <= 1e-12 within 50
/// iterations or KappaSolveError.
Vec kappa_solve(const ReducedSystem& rs, const Vec& x, const Vec& vx, const Vec& y,
                const Vec& target, const Vec& xi_guess);

/// The regular-case system on Q/G_mu -> Q/G with the xi variable eliminated
/// through the momentum constraint.
struct RegularReducedSystem {
    ReducedSystem red;

    /// kappa^2_l(vx, mu-tilde(y)).
    Vec gamma_section(const Vec& x, const Vec& vx, const Vec& y) const;
    double Rbar(const Vec& x, const Vec& vx, const Vec& y) const;
    Vec fbar(const Vec& x, const Vec& vx, const Vec& y) const;

    /// Full (x, y)-velocity of the reduced flow: horizontal transport plus
    /// the vertical representative of kappa^2 (zero g_mu component).
    Vec y_velocity(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const;

    /// Vertical velocity via the kappa projection and via the normal-form EL
    /// equation of Rbar with the gyroscopic force; the two must agree.
    Vec ydot_kappa_route(const Vec& x, const Vec& vx, const Vec& y) const;
    Vec ydot_el_route(const Vec& x, const Vec& vx, const Vec& y) const;
};

RegularReducedSystem regular_reduce(const ReducedSystem& rs);

/// Integrates the regular reduced equations: second-order horizontal part in
/// momentum form (p = dRbar/dvx as state), first-order vertical part. The
/// momentum constraint j_l = mu-tilde is enforced pointwise by the velocity
/// solve, and its residual is recorded per sample.
Trajectory integrate_reduced(const RegularReducedSystem& rr, const ReducedPoint& init, double t0,
                             double t1, double dt);

struct ConnectionChangeReport {
    double max_routhian_discrepancy = 0.0;
    double max_force_discrepancy = 0.0;
    double max() const { return std::max(max_routhian_discrepancy, max_force_discrepancy); }
};

/// Checks the connection-change identities between two principal connections:
/// the pulled-back Routhian differs by -<delta^mu(y), v_x> and the gyroscopic
/// forces by the exterior derivative of delta^mu.
ConnectionChangeReport connection_change_check(SystemPtr sys, const PrincipalConnection& omega1,
                                               const PrincipalConnection& omega2,
                                               const QuotientChart& qchart, const Vec& mu,
                                               const StateSampler& full_sampler,
                                               int n_samples = 20, std::uint64_t seed = 0);

}  // namespace routh
