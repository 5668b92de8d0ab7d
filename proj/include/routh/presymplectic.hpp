#pragma once

#include "routh/reduction.hpp"

namespace routh {

/// A point of T_MN in trivialized coordinates z = (x, vx, m): base velocity
/// plus fibre point. For the Routh-reduced system m = (y, xi); for the
/// regular reduced system m = y.
struct PresymplecticPoint {
    Vec x, vx, m;
    Vec z() const {
        Vec out(x.size() + vx.size() + m.size());
        out << x, vx, m;
        return out;
    }
};

/// Coordinate realization of an intrinsically constrained problem with a
/// gyroscopic + base force, as consumed by the presymplectic operations.
struct PresymplecticProblem {
    int n = 0;      // base dimension
    int fibre = 0;  // fibre coordinate count
    std::function<double(const Vec& z)> L;       // Lagrangian on T_MN
    std::function<Mat(const Vec& z)> beta_embed; // beta as z-sized matrix (x/y slots)
    std::function<Vec(const Vec& z)> f;          // base covector (may be null)

    int dim() const { return 2 * n + fibre; }
};

/// Problem adapters.
PresymplecticProblem presymplectic_problem(const ReducedSystem& rs);
PresymplecticProblem presymplectic_problem(const RegularReducedSystem& rr);

/// Legendre map along the base factor: d/de L(vx + e w, m).
Vec legendre_f1(const PresymplecticProblem& P, const PresymplecticPoint& z);

/// E_L = <F1 L(z), z> - L(z).
double energy(const PresymplecticProblem& P, const PresymplecticPoint& z);

struct TwoFormEval {
    Mat matrix;  // antisymmetric, on T_z(T_MN)
    enum class Provenance { PullbackCanonical, Beta, Sum } provenance = Provenance::Sum;
};

/// The presymplectic two-form: pullback of the canonical form of T*N through
/// the Legendre map, plus the beta block. Assembled in coordinates as
/// d(p . dx) with p = F1 L, from finite-difference derivatives of p.
TwoFormEval presymplectic_form(const PresymplecticProblem& P, const PresymplecticPoint& z);

/// i_zdot omega + dE - f at the point; zero along genuine critical lifts.
Vec presymplectic_residual(const PresymplecticProblem& P, const PresymplecticPoint& z,
                           const Vec& zdot);

struct PointwiseCheck {
    bool solvable = false;
    double residual = 0.0;
    int kernel_dim = 0;
};

/// One primary-constraint step of the constraint algorithm: the equation
/// i_X omega = -dE + f is solvable at z iff the right-hand side lies in the
/// range of the two-form matrix (least-squares residual <= 1e-8).
PointwiseCheck pointwise_constraint_check(const PresymplecticProblem& P,
                                          const PresymplecticPoint& z);

/// Least-squares flow direction: the minimum-norm zdot solving the
/// presymplectic equation (exact in the symplectic case).
Vec presymplectic_flow_direction(const PresymplecticProblem& P, const PresymplecticPoint& z);

struct LagrangePoincareResidual {
    std::vector<Vec> vertical;    // g-tilde* components per sample
    std::vector<Vec> horizontal;  // base covector per sample
};

/// Residuals of the Lagrange-Poincare equations of the reduced Lagrangian l
/// (momentum evolution D/Dt Fl = -/+ ad*Fl, and the horizontal equation with
/// the curvature force) along a sampled reduced curve. Zero along projections
/// of full critical curves.
LagrangePoincareResidual lagrange_poincare_residual(const ReducedSystem& rs,
                                                    const std::vector<double>& times,
                                                    const std::vector<Vec>& x_curve,
                                                    const std::vector<Vec>& vx_curve,
                                                    const std::vector<Vec>& y_curve,
                                                    const std::vector<Vec>& xi_curve);

}  // namespace routh
