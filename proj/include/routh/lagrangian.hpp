#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "routh/chart.hpp"
#include "routh/group.hpp"
#include "routh/types.hpp"

namespace routh {

using LagrangianFn = std::function<double(const ChartState&)>;
using CovectorFn = std::function<Vec(const ChartState&)>;

/// Force term F: TM -> T*M, fibred over the identity. Gyroscopic forces are
/// stored through their closed two-form beta (coefficient matrix at q, so
/// that beta(u, w) = u^T B(q) w) and may carry a supplementary covector that
/// only acts on a leading block of base coordinates (the F1 + F2 split of
/// constrained systems).
struct ForceTerm {
    enum class Kind { Zero, Gyroscopic, BaseCovector, General };

    Kind kind = Kind::Zero;
    CovectorFn fn;                           // General / BaseCovector
    std::function<Mat(const Vec&)> beta;     // Gyroscopic
    CovectorFn extra_base;                   // optional F2 on top of gyroscopic
    int base_dim = -1;                       // BaseCovector: covector lives on first base_dim slots

    static ForceTerm zero() { return {}; }
    static ForceTerm general(CovectorFn f);
    static ForceTerm base_covector(CovectorFn f_base, int base_dim);
    static ForceTerm gyroscopic(std::function<Mat(const Vec&)> beta);
    static ForceTerm gyroscopic_plus_base(std::function<Mat(const Vec&)> beta,
                                          CovectorFn f_base, int base_dim);

    bool is_zero() const { return kind == Kind::Zero; }
    /// Covector components of F at the state, length = chart dim.
    Vec eval(const ChartState& s) const;
};

/// Analytic derivative bundle a system may register; finite differences are
/// the fallback. d2Ldvdq has entries (i, j) = d^2 L / dv_i dq_j.
struct AnalyticPartials {
    CovectorFn dLdq;
    CovectorFn dLdv;
    std::function<Mat(const ChartState&)> d2Ldvdv;
    std::function<Mat(const ChartState&)> d2Ldvdq;
};

/// The triple (M, L, F) on a chart.
struct LagrangianSystem {
    ChartPtr chart;
    LagrangianFn L;
    ForceTerm F;
    std::optional<AnalyticPartials> partials;

    Vec dLdq(const ChartState& s) const;
    Vec dLdv(const ChartState& s) const;
    Mat hessian_vv(const ChartState& s) const;
    Mat hessian_vq(const ChartState& s) const;
    double energy(const ChartState& s) const;  // E_L = <dL/dv, v> - L
};

using SystemPtr = std::shared_ptr<const LagrangianSystem>;

/// Velocity-slot second derivatives of L at s (uses analytic partials when
/// registered on a wrapping system; this free-function form is the raw
/// finite-difference route).
Mat fd_hessian_vv(const LagrangianFn& L, const ChartState& s);

/// Second-order data (q, v, a) so residual operators are testable without
/// integrating.
struct SecondOrderJet {
    Vec q, v, a;
};

/// EL(L) + F at the jet: dL/dq - d/dt(dL/dv) + F, the time derivative expanded
/// by the chain rule on (q, v, a). Zero iff the jet satisfies the equations of
/// motion at this instant.
Vec el_residual(const LagrangianSystem& sys, const SecondOrderJet& jet);

struct IntegrateOptions {
    /// Attach J_L diagnostics with respect to this action (optional).
    const GroupAction* action = nullptr;
    double hessian_condition_limit = 1e12;
};

/// Normal-form integration of EL(L) + F = 0 by RK4; per-step the velocity
/// Hessian system is solved by LU with partial pivoting. Diagnostics: E_L
/// always, J_L when an action is attached.
Trajectory integrate_full(const LagrangianSystem& sys, const ChartState& s0, double t0,
                          double t1, double dt, const IntegrateOptions& opts = {});

/// Acceleration at a state (the integrator's right-hand side).
Vec full_acceleration(const LagrangianSystem& sys, const ChartState& s,
                      double cond_limit = 1e12);

}  // namespace routh
