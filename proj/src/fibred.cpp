#include "routh/fibred.hpp"

#include <cmath>
#include <random>

#include "routh/numdiff.hpp"
#include "routh/ode.hpp"

namespace routh {

FibredSystem make_fibred_system(ChartPtr total_chart, ChartPtr base_chart, int base_dim,
                                int fibre_dim, LagrangianFn L, ForceTerm F,
                                std::optional<AnalyticPartials> partials,
                                const std::function<ChartState()>& sampler) {
    if (base_dim + fibre_dim != total_chart->dim)
        throw std::invalid_argument("make_fibred_system: base + fibre dims must match the chart");

    FibredSystem fs;
    fs.total_chart = std::move(total_chart);
    fs.base_chart = std::move(base_chart);
    fs.base_dim = base_dim;
    fs.fibre_dim = fibre_dim;
    fs.L = std::move(L);
    fs.F = std::move(F);
    fs.partials = std::move(partials);

    // Reject Lagrangians that see fibre velocities.
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int s = 0; s < 8; ++s) {
        ChartState st = sampler ? sampler()
                                : ChartState(fs.total_chart,
                                             Vec::NullaryExpr(fs.total_chart->dim,
                                                              [&](Eigen::Index) { return 0.3 * unit(rng); }),
                                             Vec::NullaryExpr(fs.total_chart->dim,
                                                              [&](Eigen::Index) { return unit(rng); }));
        for (int a = 0; a < fibre_dim; ++a) {
            const int idx = base_dim + a;
            auto f = [&](const Vec& v) { return fs.L(ChartState(fs.total_chart, st.q, v)); };
            Vec dir = Vec::Unit(fs.total_chart->dim, idx);
            const double d = fd_directional(f, st.v, dir);
            if (std::abs(d) > 1e-9)
                throw std::invalid_argument(
                    "make_fibred_system: Lagrangian depends on fibre velocity '" +
                    fs.total_chart->coord_names[idx] + "' (derivative " + std::to_string(d) + ")");
        }
    }
    return fs;
}

Vec intrinsic_constraint_residual(const FibredSystem& fsys, const ChartState& s) {
    LagrangianSystem sys = fsys.as_lagrangian();
    Vec dLdq = sys.dLdq(s);
    Vec F = fsys.F.eval(s);
    return dLdq.tail(fsys.fibre_dim) + F.tail(fsys.fibre_dim);
}

SplitResidual split_el_residual(const FibredSystem& fsys, const FibredConnection& conn,
                                const SecondOrderJet& jet) {
    LagrangianSystem sys = fsys.as_lagrangian();
    Vec r = el_residual(sys, jet);
    SplitResidual out;
    out.vertical = r.tail(fsys.fibre_dim);
    Mat gamma = conn.gamma ? conn.gamma(jet.q) : Mat::Zero(fsys.fibre_dim, fsys.base_dim);
    out.horizontal = r.head(fsys.base_dim) - gamma.transpose() * out.vertical;
    return out;
}

const char* to_string(ConstraintClass c) {
    switch (c) {
        case ConstraintClass::GyroscopicRegular: return "gyroscopic-regular";
        case ConstraintClass::Configuration: return "configuration";
        case ConstraintClass::Linear: return "linear";
        case ConstraintClass::General: return "general";
    }
    return "?";
}

ConstraintClass classify_constraint(const FibredSystem& fsys,
                                    const std::function<ChartState()>& sampler, int n_samples) {
    const int n = fsys.base_dim, k = fsys.fibre_dim;

    bool gyro_regular = fsys.F.kind == ForceTerm::Kind::Gyroscopic;
    bool affine = true;
    bool config_regular = true;

    for (int s = 0; s < n_samples; ++s) {
        ChartState st = sampler();

        if (gyro_regular) {
            // Fibre-fibre block of beta must be nondegenerate on exactly the
            // fibre directions it touches.
            Mat B = fsys.F.beta(st.q).bottomRightCorner(k, k);
            int touched = 0;
            for (int i = 0; i < k; ++i)
                if (B.row(i).cwiseAbs().maxCoeff() > 1e-12) ++touched;
            Eigen::JacobiSVD<Mat> svd(B);
            int rank = 0;
            const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
            for (int i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) > 1e-10 * std::max(1.0, smax)) ++rank;
            if (touched == 0 || rank != touched) gyro_regular = false;
        }

        // Affine fibre dependence: second fibre-derivatives of L vanish. A
        // generous step keeps evaluation roundoff below the 1e-9 bar.
        auto Lq = [&](const Vec& yfib) {
            Vec q = st.q;
            q.tail(k) = yfib;
            return fsys.L(ChartState(fsys.total_chart, q, st.v));
        };
        Mat Hyy = fd_hessian(Lq, st.q.tail(k), 1e-3);
        if (Hyy.size() && Hyy.cwiseAbs().maxCoeff() > 1e-9) affine = false;

        if (!affine) {
            Eigen::JacobiSVD<Mat> svd(Hyy);
            const Vec sv = svd.singularValues();
            if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-8 * std::max(1.0, sv(0))))
                config_regular = false;
        }
    }
    (void)n;

    if (gyro_regular) return ConstraintClass::GyroscopicRegular;
    if (affine) return ConstraintClass::Linear;
    if (config_regular) return ConstraintClass::Configuration;
    return ConstraintClass::General;
}

Trajectory solve_linear_constrained(const FibredSystem& fsys, const ChartState& s0_base,
                                    double t0, double t1, double dt) {
    const int n = fsys.base_dim, k = fsys.fibre_dim;
    LagrangianSystem total = fsys.as_lagrangian();

    auto lift_state = [&](const Vec& x, const Vec& vx, const Vec& m) {
        Vec q(n + k), v = Vec::Zero(n + k);
        q << x, m;
        v.head(n) = vx;
        return ChartState(fsys.total_chart, q, v);
    };

    // alpha_a(x, vx) = dL/dy_a, y-independent for linear systems.
    auto alpha = [&](const Vec& x, const Vec& vx) {
        ChartState s = lift_state(x, vx, Vec::Zero(k));
        return Vec(total.dLdq(s).tail(k));
    };

    Vec a0 = alpha(s0_base.q, s0_base.v);
    if (a0.cwiseAbs().maxCoeff() > 1e-9)
        throw ConstraintViolationError("solve_linear_constrained: initial state violates the "
                                       "constraint (|alpha| = " +
                                       std::to_string(a0.cwiseAbs().maxCoeff()) + ")");

    // State (x, vx, m): the fibre coordinates act as multipliers; all
    // derivatives are taken on the total system at y = m, where the base EL
    // equations read H xddot + Hvq_xx vx + A^T mdot = dL/dx + F. Constraint
    // differentiation closes the DAE:
    //   [H  A^T] [xddot]   [b]
    //   [A   0 ] [mdot ] = [-(d alpha/d x) vx]
    auto rhs = [&](double, const Vec& z) {
        Vec x = z.head(n), vx = z.segment(n, n), m = z.tail(k);
        ChartState sm = lift_state(x, vx, m);

        Mat H = total.hessian_vv(sm).topLeftCorner(n, n);
        Mat Hvq = total.hessian_vq(sm);
        Mat At = Hvq.topRightCorner(n, k);  // (i, a) = d alpha_a / d vx_i
        Mat dadx = fd_jacobian([&](const Vec& xx) { return alpha(xx, vx); }, x);

        Vec b = total.dLdq(sm).head(n) - Hvq.topLeftCorner(n, n) * vx +
                total.F.eval(sm).head(n);

        Mat KKT = Mat::Zero(n + k, n + k);
        KKT.topLeftCorner(n, n) = H;
        KKT.topRightCorner(n, k) = At;
        KKT.bottomLeftCorner(k, n) = At.transpose();
        Vec rhsv(n + k);
        rhsv << b, -(dadx * vx);
        Vec sol = KKT.partialPivLu().solve(rhsv);
        if (!sol.allFinite())
            throw SingularLagrangianError(
                "solve_linear_constrained: constraint is not regular at this state");

        Vec dz(2 * n + k);
        dz << vx, sol.head(n), sol.tail(k);
        return dz;
    };

    Vec z0(2 * n + k);
    z0 << s0_base.q, s0_base.v, Vec::Zero(k);
    OdeSolution sol = rk4(rhs, z0, t0, t1, dt);

    Trajectory traj;
    traj.chart = fsys.base_chart;
    traj.times = sol.times;
    std::vector<Vec> e_ch, res_ch;
    for (const auto& z : sol.points) {
        ChartState s(fsys.base_chart, z.head(n), z.segment(n, n));
        ChartState lifted = lift_state(s.q, s.v, Vec::Zero(k));
        Vec e(1);
        e[0] = total.dLdv(lifted).head(n).dot(s.v) - total.L(lifted);
        e_ch.push_back(e);
        Vec r(1);
        r[0] = alpha(s.q, s.v).cwiseAbs().maxCoeff();
        res_ch.push_back(r);
        traj.states.push_back(std::move(s));
    }
    traj.diagnostics["E_L"] = std::move(e_ch);
    traj.diagnostics["res_constraint"] = std::move(res_ch);
    traj.validate();
    return traj;
}

}  // namespace routh
