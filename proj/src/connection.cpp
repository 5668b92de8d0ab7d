#include "routh/connection.hpp"

#include <cmath>

#include "routh/numdiff.hpp"

namespace routh {

Mat PrincipalConnection::d_omega_mu(const Vec& q, const Vec& mu) const {
    return fd_exterior_derivative(
        [this, &mu](const Vec& p) { return omega_mu_coeffs(p, mu); }, q);
}

Vec PrincipalConnection::horizontal_part(const Vec& q, const Vec& v) const {
    return v - action.generator_matrix(q) * omega(q, v);
}

PrincipalConnection connection_from_coefficients(GroupAction action,
                                                 std::function<Mat(const Vec&)> coefficients) {
    PrincipalConnection c;
    c.provenance = PrincipalConnection::Provenance::Coefficients;
    c.action = std::move(action);
    c.coefficients = std::move(coefficients);
    return c;
}

PrincipalConnection flat_connection(GroupAction action, Mat constant_coefficients) {
    PrincipalConnection c;
    c.provenance = PrincipalConnection::Provenance::Flat;
    c.action = std::move(action);
    c.coefficients = [W = std::move(constant_coefficients)](const Vec&) { return W; };
    return c;
}

PrincipalConnection mechanical_connection(const LagrangianSystem& sys, const GroupAction& action,
                                          double condition_limit) {
    // Probe the locked inertia of the metric at a representative state before
    // handing out the connection.
    PrincipalConnection c;
    c.provenance = PrincipalConnection::Provenance::Mechanical;
    c.action = action;
    auto sysc = sys;  // captured copy; systems are immutable values
    c.coefficients = [sysc, action, condition_limit](const Vec& q) -> Mat {
        ChartState s(sysc.chart, q, Vec::Zero(q.size()));
        Mat rho = sysc.hessian_vv(s);  // kinetic metric (linear terms drop out)
        Mat G = action.generator_matrix(q);
        Mat I = G.transpose() * rho * G;  // locked inertia of the metric
        Eigen::JacobiSVD<Mat> svd(I);
        const Vec sv = svd.singularValues();
        const double smin = sv(sv.size() - 1), smax = sv(0);
        if (!(smin > 0) || smax / smin > condition_limit)
            throw NotGRegularError(
                "locked inertia tensor is degenerate; supply an explicit connection");
        // omega(v) = I^-1 rho(v, sigma(e_i)) = I^-1 G^T rho v.
        return I.partialPivLu().solve(G.transpose() * rho);
    };
    return c;
}

Vec curvature(const PrincipalConnection& conn, const Vec& q, const Vec& v1, const Vec& v2) {
    Vec h1 = conn.horizontal_part(q, v1);
    Vec h2 = conn.horizontal_part(q, v2);
    const int gd = conn.action.group.dim;
    Vec out(gd);
    for (int c = 0; c < gd; ++c) {
        Mat D = fd_exterior_derivative(
            [&](const Vec& p) { return conn.coefficients(p).row(c).transpose().eval(); }, q);
        out[c] = h1.dot(D * h2);
    }
    return out;
}

void validate_connection(const PrincipalConnection& conn, const StateSampler& sampler,
                         int n_samples, std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const auto& action = conn.action;
    const int gd = action.group.dim;

    int done = 0, attempts = 0;
    while (done < n_samples && attempts < 20 * n_samples) {
        ++attempts;
        ChartState s = sampler(rng);

        // omega(sigma_q(xi)) = xi.
        Mat W = conn.coefficients(s.q);
        Mat G = action.generator_matrix(s.q);
        Mat repro = W * G - Mat::Identity(gd, gd);
        if (repro.cwiseAbs().maxCoeff() > tol)
            throw NotInvariantError("connection does not reproduce generators (defect " +
                                    std::to_string(repro.cwiseAbs().maxCoeff()) + ")");

        // Equivariance: omega(qg)(Tact v) = Ad_{g^-1} omega(q)(v) for right
        // actions, Ad_g for left ones.
        Vec xi(gd);
        for (int i = 0; i < gd; ++i) xi[i] = unit(rng);
        GroupElement g = action.group.exp(xi);
        Vec qg = action.act(g, s.q);
        if (s.chart->is_singular(qg)) continue;
        ++done;
        ChartState sg = action.act_tangent(g, s);
        Vec lhs = conn.omega(sg.q, sg.v);
        GroupElement gref = action.side == GroupAction::Side::Right ? action.group.inverse(g) : g;
        Vec rhs = action.group.Ad(gref, conn.omega(s.q, s.v));
        if ((lhs - rhs).cwiseAbs().maxCoeff() > tol)
            throw NotInvariantError("connection is not equivariant (defect " +
                                    std::to_string((lhs - rhs).cwiseAbs().maxCoeff()) + ")");
    }
}

}  // namespace routh
