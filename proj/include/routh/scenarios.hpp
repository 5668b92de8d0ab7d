#pragma once

#include "routh/presymplectic.hpp"
#include "routh/systems.hpp"

namespace routh {

/// Full-system run with E_L and J_L diagnostics attached.
Trajectory run_simulate(const SystemBundle& b, const ChartState& s0, double t0, double t1,
                        double dt);

/// Project a full trajectory to reduced coordinates sample by sample.
Trajectory project_trajectory(const ReducedSystem& rs, const Trajectory& full);

struct ReduceCompareReport {
    std::string system;
    Vec mu;
    bool g_regular = false;
    double momentum_projection_defect = 0.0;

    // Regular path.
    double sup_error_reduced = 0.0;        // projected full vs integrate_reduced
    double sup_error_reconstructed = 0.0;  // full vs reconstruct round trip
    Vec momentum_drift_full;
    double momentum_residual_reduced = 0.0;
    double presymplectic_residual_sup = 0.0;
    double runtime_full_s = 0.0;
    double runtime_reduced_s = 0.0;

    // Non-regular path.
    bool has_pointwise_check = false;
    bool on_constraint_solvable = false;
    bool off_constraint_solvable = true;
    int kernel_dim = 0;
    bool has_linear_path = false;
    double linear_constrained_sup_error = 0.0;
};

/// The full-versus-reduced pipeline: enforce J_L = mu by projection, run both
/// integrations, compare trajectories and reconstruction, and collect
/// residuals and runtimes. Non-G-regular systems route to the pointwise
/// presymplectic check (and, for linear systems, the constrained variational
/// path).
ReduceCompareReport run_reduce_compare(const SystemBundle& b, const Vec& mu, double t0, double t1,
                                       double dt);

/// Reduced run + reconstruction anchored at the default initial point.
Trajectory run_reconstruct(const SystemBundle& b, const Vec& mu, double t0, double t1, double dt);

struct CheckEntry {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
};

struct CheckReport {
    std::string system;
    std::vector<CheckEntry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

/// Runs the per-system invariant battery (invariance, partials consistency,
/// connection axioms, quotient round trip, beta structure, conservation
/// checks, G-regularity flag) with a fixed sampling seed.
CheckReport run_check(const SystemBundle& b, std::uint64_t seed = 0);

}  // namespace routh
