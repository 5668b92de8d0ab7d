#include "routh/lagrangian.hpp"

#include <cmath>

#include "routh/numdiff.hpp"
#include "routh/ode.hpp"

namespace routh {

ForceTerm ForceTerm::general(CovectorFn f) {
    ForceTerm F;
    F.kind = Kind::General;
    F.fn = std::move(f);
    return F;
}

ForceTerm ForceTerm::base_covector(CovectorFn f_base, int base_dim) {
    ForceTerm F;
    F.kind = Kind::BaseCovector;
    F.fn = std::move(f_base);
    F.base_dim = base_dim;
    return F;
}

ForceTerm ForceTerm::gyroscopic(std::function<Mat(const Vec&)> beta) {
    ForceTerm F;
    F.kind = Kind::Gyroscopic;
    F.beta = std::move(beta);
    return F;
}

ForceTerm ForceTerm::gyroscopic_plus_base(std::function<Mat(const Vec&)> beta, CovectorFn f_base,
                                          int base_dim) {
    ForceTerm F;
    F.kind = Kind::Gyroscopic;
    F.beta = std::move(beta);
    F.extra_base = std::move(f_base);
    F.base_dim = base_dim;
    return F;
}

Vec ForceTerm::eval(const ChartState& s) const {
    const auto dim = s.q.size();
    switch (kind) {
        case Kind::Zero:
            return Vec::Zero(dim);
        case Kind::General:
            return fn(s);
        case Kind::BaseCovector: {
            Vec out = Vec::Zero(dim);
            out.head(base_dim) = fn(s);
            return out;
        }
        case Kind::Gyroscopic: {
            // F(v) = -i_v beta: components -(B^T v)_j = (B v)_j by antisymmetry.
            Mat B = beta(s.q);
            Vec out = B * s.v;
            if (extra_base) out.head(base_dim) += extra_base(s);
            return out;
        }
    }
    return Vec::Zero(dim);
}

Vec LagrangianSystem::dLdq(const ChartState& s) const {
    if (partials && partials->dLdq) return partials->dLdq(s);
    return fd_gradient([&](const Vec& q) { return L(ChartState(chart, q, s.v)); }, s.q);
}

Vec LagrangianSystem::dLdv(const ChartState& s) const {
    if (partials && partials->dLdv) return partials->dLdv(s);
    return fd_gradient([&](const Vec& v) { return L(ChartState(chart, s.q, v)); }, s.v);
}

Mat LagrangianSystem::hessian_vv(const ChartState& s) const {
    if (partials && partials->d2Ldvdv) return partials->d2Ldvdv(s);
    if (partials && partials->dLdv) {
        // One analytic layer available: difference it.
        Mat J = fd_jacobian(
            [&](const Vec& v) { return partials->dLdv(ChartState(chart, s.q, v)); }, s.v);
        return 0.5 * (J + J.transpose()).eval();
    }
    return fd_hessian_vv(L, s);
}

Mat LagrangianSystem::hessian_vq(const ChartState& s) const {
    if (partials && partials->d2Ldvdq) return partials->d2Ldvdq(s);
    if (partials && partials->dLdv)
        return fd_jacobian(
            [&](const Vec& q) { return partials->dLdv(ChartState(chart, q, s.v)); }, s.q);
    const int n = chart->dim;
    Mat H(n, n);
    Vec q = s.q, v = s.v;
    for (int i = 0; i < n; ++i) {
        const double hv = fd_step2(s.v[i]);
        for (int j = 0; j < n; ++j) {
            const double hq = fd_step2(s.q[j]);
            v[i] = s.v[i] + hv; q[j] = s.q[j] + hq;
            const double fpp = L(ChartState(chart, q, v));
            q[j] = s.q[j] - hq;
            const double fpm = L(ChartState(chart, q, v));
            v[i] = s.v[i] - hv;
            const double fmm = L(ChartState(chart, q, v));
            q[j] = s.q[j] + hq;
            const double fmp = L(ChartState(chart, q, v));
            v[i] = s.v[i]; q[j] = s.q[j];
            H(i, j) = (fpp - fpm - fmp + fmm) / (4.0 * hv * hq);
        }
    }
    if (!H.allFinite()) throw NumericalDomainError("non-finite value in hessian_vq");
    return H;
}

double LagrangianSystem::energy(const ChartState& s) const {
    return dLdv(s).dot(s.v) - L(s);
}

Mat fd_hessian_vv(const LagrangianFn& L, const ChartState& s) {
    auto f = [&](const Vec& v) { return L(ChartState(s.chart, s.q, v)); };
    Mat H = fd_hessian(f, s.v);
    return 0.5 * (H + H.transpose()).eval();
}

Vec el_residual(const LagrangianSystem& sys, const SecondOrderJet& jet) {
    ChartState s(sys.chart, jet.q, jet.v);
    s.require_nonsingular();
    Vec ddt_dLdv = sys.hessian_vq(s) * jet.v + sys.hessian_vv(s) * jet.a;
    return sys.dLdq(s) - ddt_dLdv + sys.F.eval(s);
}

Vec full_acceleration(const LagrangianSystem& sys, const ChartState& s, double cond_limit) {
    Mat H = sys.hessian_vv(s);
    Eigen::JacobiSVD<Mat> svd(H);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 0) || smax / smin > cond_limit)
        throw SingularLagrangianError(
            "velocity Hessian is numerically singular (condition " +
            std::to_string(smin > 0 ? smax / smin : std::numeric_limits<double>::infinity()) +
            "); the system calls for presymplectic constraint analysis");
    Vec rhs = sys.dLdq(s) + sys.F.eval(s) - sys.hessian_vq(s) * s.v;
    return H.partialPivLu().solve(rhs);
}

Trajectory integrate_full(const LagrangianSystem& sys, const ChartState& s0, double t0,
                          double t1, double dt, const IntegrateOptions& opts) {
    const int n = sys.chart->dim;
    s0.require_nonsingular();

    auto rhs = [&](double, const Vec& z) {
        ChartState s(sys.chart, z.head(n), z.tail(n));
        if (sys.chart->is_singular(s.q))
            throw ChartSingularityError("trajectory entered singular region of chart '" +
                                        sys.chart->name + "'");
        Vec a = full_acceleration(sys, s, opts.hessian_condition_limit);
        Vec dz(2 * n);
        dz << s.v, a;
        return dz;
    };

    Vec z0(2 * n);
    z0 << s0.q, s0.v;
    OdeSolution sol = rk4(rhs, z0, t0, t1, dt);

    Trajectory traj;
    traj.chart = sys.chart;
    traj.times = sol.times;
    traj.states.reserve(sol.points.size());
    std::vector<Vec> e_channel, j_channel;
    for (const auto& z : sol.points) {
        ChartState s(sys.chart, z.head(n), z.tail(n));
        Vec e(1);
        e[0] = sys.energy(s);
        e_channel.push_back(e);
        if (opts.action) {
            Vec j(opts.action->group.dim);
            Mat G = opts.action->generator_matrix(s.q);
            Vec p = sys.dLdv(s);
            for (int i = 0; i < opts.action->group.dim; ++i) j[i] = p.dot(G.col(i));
            j_channel.push_back(j);
        }
        traj.states.push_back(std::move(s));
    }
    traj.diagnostics["E_L"] = std::move(e_channel);
    if (opts.action) traj.diagnostics["J_L"] = std::move(j_channel);
    traj.validate();
    return traj;
}

}  // namespace routh
