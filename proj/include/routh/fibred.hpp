#pragma once

#include <functional>

#include "routh/lagrangian.hpp"

namespace routh {

/// An intrinsically constrained system on a fibred chart: total coordinates
/// are (x..., y...) with x the first base_dim entries, and L is a function of
/// (x, xdot, y) only. Construction rejects Lagrangians with fibre-velocity
/// dependence.
struct FibredSystem {
    ChartPtr total_chart;
    ChartPtr base_chart;
    int base_dim = 0;
    int fibre_dim = 0;
    LagrangianFn L;  // on the total chart; must ignore v-components of the fibre
    ForceTerm F;     // on the total chart
    std::optional<AnalyticPartials> partials;  // optional, on the total chart

    LagrangianSystem as_lagrangian() const {
        return LagrangianSystem{total_chart, L, F, partials};
    }

    Vec base_part(const Vec& total) const { return total.head(base_dim); }
    Vec fibre_part(const Vec& total) const { return total.tail(fibre_dim); }
};

/// Builds and validates a fibred system. The fibre-velocity independence of L
/// is checked numerically on sample states (tolerance 1e-9).
FibredSystem make_fibred_system(ChartPtr total_chart, ChartPtr base_chart, int base_dim,
                                int fibre_dim, LagrangianFn L, ForceTerm F,
                                std::optional<AnalyticPartials> partials = std::nullopt,
                                const std::function<ChartState()>& sampler = nullptr);

/// Connection coefficients Gamma^a_i(x, y) on the fibration; the horizontal
/// distribution is spanned by d/dx^i - Gamma^a_i d/dy^a.
struct FibredConnection {
    std::function<Mat(const Vec& total_q)> gamma;  // fibre_dim x base_dim
};

/// dL/dy^a + F_a componentwise; zero iff the intrinsic constraint holds at s.
Vec intrinsic_constraint_residual(const FibredSystem& fsys, const ChartState& s);

/// Horizontal / vertical split of the EL residual with respect to a fibred
/// connection. Substituting the vertical part back into the horizontal part
/// removes the Gamma dependence.
struct SplitResidual {
    Vec horizontal;  // length base_dim
    Vec vertical;    // length fibre_dim
};
SplitResidual split_el_residual(const FibredSystem& fsys, const FibredConnection& conn,
                                const SecondOrderJet& jet);

enum class ConstraintClass { GyroscopicRegular, Configuration, Linear, General };
const char* to_string(ConstraintClass c);

/// Classifies the intrinsic constraint by numerical sampling: a gyroscopic
/// force with nondegenerate fibre-fibre block, affine fibre dependence of L,
/// a regular fibre Hessian, or none of those.
ConstraintClass classify_constraint(const FibredSystem& fsys,
                                    const std::function<ChartState()>& sampler, int n_samples = 20);

/// For linear systems L = L0(v_x) + <alpha(v_x), y>: integrates the
/// variational problem for L0 constrained to C = {alpha = 0}, with fibre
/// coordinates acting as multipliers. s0 must lie on C.
Trajectory solve_linear_constrained(const FibredSystem& fsys, const ChartState& s0_base,
                                    double t0, double t1, double dt);

}  // namespace routh
