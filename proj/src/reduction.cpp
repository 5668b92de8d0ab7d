#include "routh/reduction.hpp"

#include <cmath>

#include "routh/numdiff.hpp"
#include "routh/ode.hpp"

namespace routh {

namespace {

std::vector<std::string> concat_names(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

ChartState ReducedSystem::lift(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const {
    return assemble(conn, qchart, full->chart, ReducedPoint{x, vx, y, xi});
}

double ReducedSystem::R_mu(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const {
    ChartState s = lift(x, vx, y, xi);
    return full->L(s) - mu.dot(conn.omega(s.q, s.v));
}

Vec ReducedSystem::dR_dvx(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const {
    ChartState s = lift(x, vx, y, xi);
    Vec p = full->dLdv(s) - conn.coefficients(s.q).transpose() * mu;
    Vec out(n());
    for (int i = 0; i < n(); ++i)
        out[i] = p.dot(horizontal_lift(conn, qchart, Vec::Unit(n(), i), s.q));
    return out;
}

Vec ReducedSystem::j_l(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const {
    ChartState s = lift(x, vx, y, xi);
    Vec p = full->dLdv(s);
    Vec out(gdim());
    for (int a = 0; a < gdim(); ++a) {
        Vec eta = qchart.class_representative(s.q, Vec::Unit(gdim(), a));
        out[a] = p.dot(conn.action.generator(s.q, eta));
    }
    return out;
}

Vec ReducedSystem::mu_tilde_at(const Vec& x, const Vec& y) const {
    return mu_tilde(qchart, mu, x, y);
}

Vec ReducedSystem::f_reduced(const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) const {
    if (full->F.is_zero()) return Vec::Zero(n());
    ChartState s = lift(x, vx, y, xi);
    Vec F = full->F.eval(s);
    Vec out(n());
    for (int i = 0; i < n(); ++i)
        out[i] = F.dot(horizontal_lift(conn, qchart, Vec::Unit(n(), i), s.q));
    return out;
}

Mat ReducedSystem::beta_matrix(const Vec& x, const Vec& y) const {
    return beta_mu_matrix(conn, qchart, mu, x, y);
}

BetaBlocks ReducedSystem::beta_blocks(const Vec& x, const Vec& y) const {
    return beta_mu_blocks(conn, qchart, mu, x, y);
}

FibredSystem ReducedSystem::fibred() const {
    const int nn = n(), kk = k(), gd = gdim();
    auto self = *this;  // value capture keeps the fibred view self-contained

    LagrangianFn L = [self, nn, kk, gd](const ChartState& s) {
        return self.R_mu(s.q.head(nn), s.v.head(nn), s.q.segment(nn, kk), s.q.tail(gd));
    };

    auto beta_fn = [self, nn, kk, gd](const Vec& q) {
        Mat B = Mat::Zero(nn + kk + gd, nn + kk + gd);
        B.topLeftCorner(nn + kk, nn + kk) = self.beta_matrix(q.head(nn), q.segment(nn, kk));
        return B;
    };
    CovectorFn f_base = [self, nn, kk, gd](const ChartState& s) {
        return self.f_reduced(s.q.head(nn), s.v.head(nn), s.q.segment(nn, kk), s.q.tail(gd));
    };

    FibredSystem fs;
    fs.total_chart = fibred_chart;
    fs.base_chart = qchart.x_chart;
    fs.base_dim = nn;
    fs.fibre_dim = kk + gd;
    fs.L = std::move(L);
    fs.F = full->F.is_zero() ? ForceTerm::gyroscopic(beta_fn)
                             : ForceTerm::gyroscopic_plus_base(beta_fn, std::move(f_base), nn);
    return fs;
}

ReducedPoint ReducedSystem::sample_point(std::mt19937_64& rng) const {
    ChartState s = full_sampler(rng);
    return quotient_coords(conn, qchart, s);
}

ReducedSystem reduce(SystemPtr sys, const PrincipalConnection& conn, const QuotientChart& qchart,
                     Vec mu, StateSampler full_sampler, const ReduceOptions& opts) {
    if (opts.run_invariance_check) {
        InvarianceReport rep = check_invariance(*sys, conn.action, full_sampler,
                                                opts.invariance_samples, opts.seed);
        if (!rep.all())
            throw NotInvariantError(
                "system is not G-invariant (L defect " + std::to_string(rep.max_L_violation) +
                ", force defects " + std::to_string(rep.max_F1_violation) + ", " +
                std::to_string(rep.max_F2_violation) + ")");
    }
    if (!opts.assume_mu_regular) {
        std::mt19937_64 rng(opts.seed);
        ChartState s = full_sampler(rng);
        Mat I = locked_inertia(*sys, conn.action, s);
        Eigen::JacobiSVD<Mat> svd(I);
        const Vec sv = svd.singularValues();
        if (!(sv(sv.size() - 1) > 1e-10 * std::max(1.0, sv(0))))
            throw NotGRegularError(
                "locked inertia is rank deficient; assert mu regularity explicitly "
                "(ReduceOptions::assume_mu_regular) to reduce anyway");
    }

    ReducedSystem rs;
    rs.full = std::move(sys);
    rs.conn = conn;
    rs.qchart = qchart;
    rs.mu = std::move(mu);
    rs.g_mu_basis = isotropy_subalgebra(conn.action.group, rs.mu);
    rs.full_sampler = std::move(full_sampler);

    auto reduced_names = concat_names(qchart.x_chart->coord_names, qchart.y_chart->coord_names);
    auto x_sing = qchart.x_chart->singular_region;
    auto y_sing = qchart.y_chart->singular_region;
    const int nn = qchart.n();
    rs.reduced_chart = make_chart(
        rs.full->chart->name + "/reduced", reduced_names, [x_sing, y_sing, nn](const Vec& q) {
            return (x_sing && x_sing(q.head(nn))) || (y_sing && y_sing(q.tail(q.size() - nn)));
        });

    std::vector<std::string> xi_names;
    for (int a = 0; a < conn.action.group.dim; ++a) xi_names.push_back("xi" + std::to_string(a + 1));
    rs.fibred_chart = make_chart(rs.full->chart->name + "/fibred",
                                 concat_names(reduced_names, xi_names),
                                 [x_sing, y_sing, nn, k = qchart.k()](const Vec& q) {
                                     return (x_sing && x_sing(q.head(nn))) ||
                                            (y_sing && y_sing(q.segment(nn, k)));
                                 });
    return rs;
}

GRegularityReport g_regularity_test(const ReducedSystem& rs, int n_samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GRegularityReport rep;
    rep.is_regular = true;
    for (int i = 0; i < n_samples; ++i) {
        ReducedPoint r = rs.sample_point(rng);
        Mat J = fd_jacobian(
            [&](const Vec& xi) { return rs.j_l(r.x, r.vx, r.y, xi); }, r.xi);
        Eigen::JacobiSVD<Mat> svd(J);
        const Vec sv = svd.singularValues();
        const double smax = sv(0), smin = sv(sv.size() - 1);
        if (!(smin > 1e-8 * std::max(1.0, smax))) {
            rep.is_regular = false;
            rep.worst_condition = std::numeric_limits<double>::infinity();
        } else if (rep.worst_condition < smax / smin &&
                   rep.worst_condition != std::numeric_limits<double>::infinity()) {
            rep.worst_condition = smax / smin;
        }
    }
    return rep;
}

Vec kappa_solve(const ReducedSystem& rs, const Vec& x, const Vec& vx, const Vec& y,
                const Vec& target, const Vec& xi_guess) {
    Vec xi = xi_guess;
    const double scale = std::max(1.0, target.size() ? target.cwiseAbs().maxCoeff() : 1.0);
    double res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
        Vec r = rs.j_l(x, vx, y, xi) - target;
        res = r.cwiseAbs().maxCoeff();
        if (res <= 1e-13 * scale) return xi;
        Mat J = fd_jacobian([&](const Vec& z) { return rs.j_l(x, vx, y, z); }, xi);
        Eigen::PartialPivLU<Mat> lu(J);
        Vec step = lu.solve(r);
        if (!step.allFinite())
            throw KappaSolveError("kappa_solve: singular Newton system (residual " +
                                      std::to_string(res) + ")",
                                  res);
        xi -= step;
    }
    Vec r = rs.j_l(x, vx, y, xi) - target;
    res = r.cwiseAbs().maxCoeff();
    if (res > 1e-12 * scale)
        throw KappaSolveError("kappa_solve: no convergence (residual " + std::to_string(res) + ")",
                              res);
    return xi;
}

Vec RegularReducedSystem::gamma_section(const Vec& x, const Vec& vx, const Vec& y) const {
    return kappa_solve(red, x, vx, y, red.mu_tilde_at(x, y), Vec::Zero(red.gdim()));
}

double RegularReducedSystem::Rbar(const Vec& x, const Vec& vx, const Vec& y) const {
    return red.R_mu(x, vx, y, gamma_section(x, vx, y));
}

Vec RegularReducedSystem::fbar(const Vec& x, const Vec& vx, const Vec& y) const {
    return red.f_reduced(x, vx, y, gamma_section(x, vx, y));
}

Vec RegularReducedSystem::y_velocity(const Vec& x, const Vec& vx, const Vec& y,
                                     const Vec& xi) const {
    ChartState s = red.lift(x, vx, y, xi);
    return red.qchart.proj_y_jacobian(s.q) * s.v;
}

Vec RegularReducedSystem::ydot_kappa_route(const Vec& x, const Vec& vx, const Vec& y) const {
    return y_velocity(x, vx, y, gamma_section(x, vx, y));
}

Vec RegularReducedSystem::ydot_el_route(const Vec& x, const Vec& vx, const Vec& y) const {
    const int nn = red.n(), kk = red.k();
    Vec dRdy = fd_gradient(
        [&](const Vec& yy) { return Rbar(x, vx, yy); }, y);
    Mat B = red.beta_matrix(x, y);
    // y-slot equation: dRbar/dy_a + (B v)_a = 0 with v = (vx, ydot).
    Mat Byy = B.bottomRightCorner(kk, kk);
    Mat Byx = B.bottomLeftCorner(kk, nn);
    Vec rhs = -dRdy - Byx * vx;
    Vec ydot_v = Byy.partialPivLu().solve(rhs);
    // Horizontal transport part of ydot (zero when the base is trivial).
    if (nn > 0) {
        ChartState s = red.lift(x, vx, y, gamma_section(x, vx, y));
        Vec hor = Vec::Zero(s.q.size());
        for (int i = 0; i < nn; ++i)
            hor += vx[i] * horizontal_lift(red.conn, red.qchart, Vec::Unit(nn, i), s.q);
        ydot_v += red.qchart.proj_y_jacobian(s.q) * hor;
    }
    return ydot_v;
}

RegularReducedSystem regular_reduce(const ReducedSystem& rs) {
    GRegularityReport rep = g_regularity_test(rs);
    if (!rep.is_regular)
        throw NotGRegularError("system is not G-regular; the xi variable cannot be eliminated");
    return RegularReducedSystem{rs};
}

Trajectory integrate_reduced(const RegularReducedSystem& rr, const ReducedPoint& init, double t0,
                             double t1, double dt) {
    const ReducedSystem& rs = rr.red;
    const int nn = rs.n(), kk = rs.k(), gd = rs.gdim();

    // Velocity recovery: given (x, y, p), solve dR/dvx = p and j_l = mu-tilde
    // jointly for (vx, xi). The Jacobian is T^T Hvv T with T the lifted frame,
    // assembled analytically; one Newton step suffices for velocity-quadratic
    // Lagrangians.
    struct Warm {
        Vec vx, xi;
    };
    auto solve_velocity = [&rs, nn, gd](const Vec& x, const Vec& y, const Vec& p, Warm& warm) {
        Vec vx = warm.vx, xi = warm.xi;
        const Vec mt = rs.mu_tilde_at(x, y);
        const double scale =
            std::max({1.0, p.size() ? p.cwiseAbs().maxCoeff() : 0.0, mt.cwiseAbs().maxCoeff()});
        for (int it = 0; it < 50; ++it) {
            Vec r1 = rs.dR_dvx(x, vx, y, xi) - p;
            Vec r2 = rs.j_l(x, vx, y, xi) - mt;
            const double res = std::max(r1.size() ? r1.cwiseAbs().maxCoeff() : 0.0,
                                        r2.cwiseAbs().maxCoeff());
            if (res <= 1e-13 * scale) {
                warm.vx = vx;
                warm.xi = xi;
                return std::pair<Vec, Vec>(vx, xi);
            }
            ChartState s = rs.lift(x, vx, y, xi);
            Mat Hvv = rs.full->hessian_vv(s);
            Mat T(s.q.size(), nn + gd);
            for (int i = 0; i < nn; ++i)
                T.col(i) = horizontal_lift(rs.conn, rs.qchart, Vec::Unit(nn, i), s.q);
            for (int a = 0; a < gd; ++a)
                T.col(nn + a) = rs.conn.action.generator(
                    s.q, rs.qchart.class_representative(s.q, Vec::Unit(gd, a)));
            Mat J = T.transpose() * Hvv * T;
            Vec r(nn + gd);
            r << r1, r2;
            Vec step = J.partialPivLu().solve(r);
            if (!step.allFinite())
                throw KappaSolveError("integrate_reduced: singular velocity system", res);
            vx -= step.head(nn);
            xi -= step.tail(gd);
        }
        throw KappaSolveError("integrate_reduced: velocity solve did not converge", 1.0);
    };

    // Initial momentum from the (possibly kappa-projected) initial point.
    Vec xi0 = kappa_solve(rs, init.x, init.vx, init.y, rs.mu_tilde_at(init.x, init.y), init.xi);
    Vec p0 = rs.dR_dvx(init.x, init.vx, init.y, xi0);

    Warm warm{init.vx, xi0};
    auto rhs = [&](double, const Vec& z) {
        Vec x = z.head(nn);
        Vec p = z.segment(nn, nn);
        Vec y = z.tail(kk);
        if (rs.reduced_chart->singular_region) {
            Vec qred(nn + kk);
            qred << x, y;
            if (rs.reduced_chart->is_singular(qred))
                throw ChartSingularityError("reduced trajectory entered singular region");
        }
        auto [vx, xi] = solve_velocity(x, y, p, warm);
        ChartState s = rs.lift(x, vx, y, xi);
        Vec ydot = rs.qchart.proj_y_jacobian(s.q) * s.v;

        Vec pdot = Vec::Zero(nn);
        if (nn > 0) {
            Vec dRdx = fd_gradient(
                [&](const Vec& xx) { return rs.R_mu(xx, vx, y, xi); }, x);
            Mat B = rs.beta_matrix(x, y);
            Vec v_xy(nn + kk);
            v_xy << vx, ydot;
            Vec zeta = B * v_xy;  // -i_v beta as a covector
            pdot = dRdx + rs.f_reduced(x, vx, y, xi) + zeta.head(nn);
        }
        Vec dz(nn + nn + kk);
        dz << vx, pdot, ydot;
        return dz;
    };

    Vec z0(nn + nn + kk);
    z0 << init.x, p0, init.y;
    OdeSolution sol = rk4(rhs, z0, t0, t1, dt);

    Trajectory traj;
    traj.chart = rs.reduced_chart;
    traj.times = sol.times;
    std::vector<Vec> xi_ch, jres_ch, vres_ch, er_ch;
    Warm warm_out{init.vx, xi0};
    for (const auto& z : sol.points) {
        Vec x = z.head(nn), p = z.segment(nn, nn), y = z.tail(kk);
        auto [vx, xi] = solve_velocity(x, y, p, warm_out);
        ChartState s = rs.lift(x, vx, y, xi);
        Vec ydot = rs.qchart.proj_y_jacobian(s.q) * s.v;

        Vec qred(nn + kk), vred(nn + kk);
        qred << x, y;
        vred << vx, ydot;
        traj.states.emplace_back(rs.reduced_chart, qred, vred);

        xi_ch.push_back(xi);
        Vec jr(1);
        jr[0] = (rs.j_l(x, vx, y, xi) - rs.mu_tilde_at(x, y)).cwiseAbs().maxCoeff();
        jres_ch.push_back(jr);

        // Vertical-equation residual: dR/dy + zeta_y along the flow.
        Vec vres(1);
        if (kk > 0) {
            Vec dRdy = fd_gradient(
                [&](const Vec& yy) { return rs.R_mu(x, vx, yy, xi); }, y);
            Mat B = rs.beta_matrix(x, y);
            Vec v_xy(nn + kk);
            v_xy << vx, ydot;
            Vec zeta = B * v_xy;
            vres[0] = (dRdy + zeta.tail(kk)).cwiseAbs().maxCoeff();
        } else {
            vres[0] = 0.0;
        }
        vres_ch.push_back(vres);

        Vec er(1);
        er[0] = p.dot(vx) - rs.R_mu(x, vx, y, xi);
        er_ch.push_back(er);
    }
    traj.diagnostics["xi"] = std::move(xi_ch);
    traj.diagnostics["res_momentum"] = std::move(jres_ch);
    traj.diagnostics["res_vertical"] = std::move(vres_ch);
    traj.diagnostics["E_R"] = std::move(er_ch);
    traj.validate();
    return traj;
}

ConnectionChangeReport connection_change_check(SystemPtr sys, const PrincipalConnection& omega1,
                                               const PrincipalConnection& omega2,
                                               const QuotientChart& qchart, const Vec& mu,
                                               const StateSampler& full_sampler, int n_samples,
                                               std::uint64_t seed) {
    ReduceOptions opts;
    opts.run_invariance_check = false;
    opts.assume_mu_regular = true;
    ReducedSystem r1 = reduce(sys, omega1, qchart, mu, full_sampler, opts);
    ReducedSystem r2 = reduce(sys, omega2, qchart, mu, full_sampler, opts);

    std::mt19937_64 rng(seed);
    ConnectionChangeReport rep;
    const int nn = qchart.n(), gd = omega1.action.group.dim;
    for (int i = 0; i < n_samples; ++i) {
        ReducedPoint r = r1.sample_point(rng);
        Vec q = qchart.section(r.x, r.y);

        // delta-tilde(v_x) in class components, via any lift (delta kills verticals).
        Vec hlift = Vec::Zero(q.size());
        for (int j = 0; j < nn; ++j)
            hlift += r.vx[j] * horizontal_lift(omega1, qchart, Vec::Unit(nn, j), q);
        Vec delta_vx = omega2.omega(q, hlift) - omega1.omega(q, hlift);
        Vec dtilde = qchart.class_components(q, delta_vx);
        const double pairing = mu.dot(delta_vx);

        const double lhs = r2.R_mu(r.x, r.vx, r.y, r.xi + dtilde);
        const double rhs = r1.R_mu(r.x, r.vx, r.y, r.xi) - pairing;
        rep.max_routhian_discrepancy =
            std::max(rep.max_routhian_discrepancy, std::abs(lhs - rhs));

        // Force identity: beta2 = beta1 - d(delta^mu) as matrices on (x, y).
        const int kk = qchart.k();
        Vec xy(nn + kk);
        xy << r.x, r.y;
        auto delta_mu_form = [&](const Vec& z) {
            Vec xx = z.head(nn), yy = z.tail(kk);
            Vec qq = qchart.section(xx, yy);
            Vec c(nn + kk);
            c.setZero();
            for (int j = 0; j < nn; ++j) {
                Vec h = horizontal_lift(omega1, qchart, Vec::Unit(nn, j), qq);
                c[j] = mu.dot(omega2.omega(qq, h) - omega1.omega(qq, h));
            }
            return c;
        };
        Mat ddelta = fd_exterior_derivative(delta_mu_form, xy);
        Mat B1 = r1.beta_matrix(r.x, r.y);
        Mat B2 = r2.beta_matrix(r.x, r.y);
        Mat defect = B2 - B1 + ddelta;
        rep.max_force_discrepancy =
            std::max(rep.max_force_discrepancy,
                     defect.size() ? defect.cwiseAbs().maxCoeff() : 0.0);
    }
    return rep;
}

}  // namespace routh
