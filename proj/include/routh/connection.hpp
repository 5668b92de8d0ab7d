#pragma once

#include <functional>

#include "routh/lagrangian.hpp"
#include "routh/momentum.hpp"

namespace routh {

/// A principal connection on Q -> Q/G in chart coordinates. `coefficients`
/// gives the g-valued one-form as a (group dim x chart dim) matrix W(q), so
/// omega(q)(v) = W(q) v.
struct PrincipalConnection {
    enum class Provenance { Mechanical, Coefficients, Flat };

    Provenance provenance = Provenance::Coefficients;
    GroupAction action;
    std::function<Mat(const Vec& q)> coefficients;

    Vec omega(const Vec& q, const Vec& v) const { return coefficients(q) * v; }

    /// Coefficients of the scalar one-form omega^mu = <mu, omega>.
    Vec omega_mu_coeffs(const Vec& q, const Vec& mu) const {
        return coefficients(q).transpose() * mu;
    }

    /// Antisymmetrized derivative matrix of omega^mu: (d omega^mu)(u, w) = u^T D w.
    Mat d_omega_mu(const Vec& q, const Vec& mu) const;

    /// Horizontal projection within T_qQ: v - sigma_q(omega(v)).
    Vec horizontal_part(const Vec& q, const Vec& v) const;
};

/// Connection axiom check (reproduction of generators and equivariance) at
/// sampled states. Throws NotInvariantError beyond tolerance 1e-8.
void validate_connection(const PrincipalConnection& conn, const StateSampler& sampler,
                         int n_samples = 10, std::uint64_t seed = 0, double tol = 1e-8);

/// Connection from an explicit coefficient table.
PrincipalConnection connection_from_coefficients(GroupAction action,
                                                 std::function<Mat(const Vec&)> coefficients);

/// Coordinate connection with constant coefficients (zero curvature).
PrincipalConnection flat_connection(GroupAction action, Mat constant_coefficients);

/// The mechanical connection of a kinetic-energy metric: omega = I(q)^-1 J,
/// with the metric read off the velocity Hessian of L. Degenerate locked
/// inertia raises NotGRegularError (an explicit connection must be supplied
/// instead).
PrincipalConnection mechanical_connection(const LagrangianSystem& sys, const GroupAction& action,
                                          double condition_limit = 1e10);

/// Curvature evaluated on two tangent vectors: d omega on the horizontal
/// projections (the bracket term vanishes there).
Vec curvature(const PrincipalConnection& conn, const Vec& q, const Vec& v1, const Vec& v2);

}  // namespace routh
