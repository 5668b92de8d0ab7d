#include "routh/presymplectic.hpp"

#include <cmath>

#include "routh/numdiff.hpp"

namespace routh {

namespace {

// Splits z = (x, vx, m).
struct ZView {
    Vec x, vx, m;
};
ZView split_z(const PresymplecticProblem& P, const Vec& z) {
    return {z.head(P.n), z.segment(P.n, P.n), z.tail(P.fibre)};
}

Vec embed_base_covector(const PresymplecticProblem& P, const Vec& f) {
    Vec out = Vec::Zero(P.dim());
    out.head(P.n) = f;
    return out;
}

}  // namespace

PresymplecticProblem presymplectic_problem(const ReducedSystem& rs) {
    PresymplecticProblem P;
    const int n = rs.n(), k = rs.k(), gd = rs.gdim();
    P.n = n;
    P.fibre = k + gd;
    P.L = [rs, n, k, gd](const Vec& z) {
        return rs.R_mu(z.head(n), z.segment(n, n), z.segment(2 * n, k), z.tail(gd));
    };
    P.beta_embed = [rs, n, k, gd](const Vec& z) {
        Mat B = rs.beta_matrix(z.head(n), z.segment(2 * n, k));
        Mat out = Mat::Zero(2 * n + k + gd, 2 * n + k + gd);
        // (x, y) coordinates of Q/G_mu sit at z-slots [0, n) and [2n, 2n+k).
        std::vector<int> idx(n + k);
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int a = 0; a < k; ++a) idx[n + a] = 2 * n + a;
        for (int r = 0; r < n + k; ++r)
            for (int c = 0; c < n + k; ++c) out(idx[r], idx[c]) = B(r, c);
        return out;
    };
    P.f = [rs, n, k, gd](const Vec& z) {
        return rs.f_reduced(z.head(n), z.segment(n, n), z.segment(2 * n, k), z.tail(gd));
    };
    return P;
}

PresymplecticProblem presymplectic_problem(const RegularReducedSystem& rr) {
    PresymplecticProblem P;
    const int n = rr.red.n(), k = rr.red.k();
    P.n = n;
    P.fibre = k;
    P.L = [rr, n, k](const Vec& z) {
        return rr.Rbar(z.head(n), z.segment(n, n), z.tail(k));
    };
    P.beta_embed = [rr, n, k](const Vec& z) {
        Mat B = rr.red.beta_matrix(z.head(n), z.tail(k));
        Mat out = Mat::Zero(2 * n + k, 2 * n + k);
        std::vector<int> idx(n + k);
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int a = 0; a < k; ++a) idx[n + a] = 2 * n + a;
        for (int r = 0; r < n + k; ++r)
            for (int c = 0; c < n + k; ++c) out(idx[r], idx[c]) = B(r, c);
        return out;
    };
    P.f = [rr, n, k](const Vec& z) {
        return rr.fbar(z.head(n), z.segment(n, n), z.tail(k));
    };
    return P;
}

Vec legendre_f1(const PresymplecticProblem& P, const PresymplecticPoint& z) {
    return fd_gradient(
        [&](const Vec& vx) {
            Vec zz(P.dim());
            zz << z.x, vx, z.m;
            return P.L(zz);
        },
        z.vx);
}

double energy(const PresymplecticProblem& P, const PresymplecticPoint& z) {
    return legendre_f1(P, z).dot(z.vx) - P.L(z.z());
}

TwoFormEval presymplectic_form(const PresymplecticProblem& P, const PresymplecticPoint& zp) {
    const Vec z = zp.z();
    const int D = P.dim();

    // p(z) = F1 L as a function of all coordinates.
    auto p_of_z = [&](const Vec& zz) {
        auto v = split_z(P, zz);
        return legendre_f1(P, {v.x, v.vx, v.m});
    };
    Mat Pjac = fd_jacobian(p_of_z, z);  // n x D

    Mat X = Mat::Zero(P.n, D);
    for (int i = 0; i < P.n; ++i) X(i, i) = 1.0;

    TwoFormEval out;
    out.matrix = Pjac.transpose() * X - X.transpose() * Pjac;
    out.matrix += P.beta_embed ? P.beta_embed(z) : Mat::Zero(D, D);
    // Enforce exact antisymmetry against roundoff.
    out.matrix = 0.5 * (out.matrix - out.matrix.transpose()).eval();
    return out;
}

Vec presymplectic_residual(const PresymplecticProblem& P, const PresymplecticPoint& zp,
                           const Vec& zdot) {
    const Vec z = zp.z();
    TwoFormEval omega = presymplectic_form(P, zp);
    Vec dE = fd_gradient(
        [&](const Vec& zz) {
            auto v = split_z(P, zz);
            return energy(P, {v.x, v.vx, v.m});
        },
        z);
    Vec f = P.f ? embed_base_covector(P, P.f(z)) : Vec(Vec::Zero(P.dim()));
    return omega.matrix.transpose() * zdot + dE - f;
}

PointwiseCheck pointwise_constraint_check(const PresymplecticProblem& P,
                                          const PresymplecticPoint& zp) {
    const Vec z = zp.z();
    TwoFormEval omega = presymplectic_form(P, zp);
    Vec dE = fd_gradient(
        [&](const Vec& zz) {
            auto v = split_z(P, zz);
            return energy(P, {v.x, v.vx, v.m});
        },
        z);
    Vec b = -dE + (P.f ? embed_base_covector(P, P.f(z)) : Vec(Vec::Zero(P.dim())));

    // Solvability of omega^T zdot = b ... the equation is i_X omega = b, i.e.
    // omega^T X = b with omega antisymmetric.
    Eigen::JacobiSVD<Mat> svd(omega.matrix.transpose(),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    svd.setThreshold(smax > 0 ? 1e-10 : 1.0);
    Vec sol = svd.solve(b);
    PointwiseCheck out;
    out.residual = (omega.matrix.transpose() * sol - b).norm();
    out.solvable = out.residual <= 1e-8 * std::max(1.0, b.norm());
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * std::max(1.0, smax)) ++rank;
    out.kernel_dim = P.dim() - rank;
    return out;
}

Vec presymplectic_flow_direction(const PresymplecticProblem& P, const PresymplecticPoint& zp) {
    const Vec z = zp.z();
    TwoFormEval omega = presymplectic_form(P, zp);
    Vec dE = fd_gradient(
        [&](const Vec& zz) {
            auto v = split_z(P, zz);
            return energy(P, {v.x, v.vx, v.m});
        },
        z);
    Vec b = -dE + (P.f ? embed_base_covector(P, P.f(z)) : Vec(Vec::Zero(P.dim())));
    Eigen::JacobiSVD<Mat> svd(omega.matrix.transpose(),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    return svd.solve(b);
}

LagrangePoincareResidual lagrange_poincare_residual(const ReducedSystem& rs,
                                                    const std::vector<double>& times,
                                                    const std::vector<Vec>& x_curve,
                                                    const std::vector<Vec>& vx_curve,
                                                    const std::vector<Vec>& y_curve,
                                                    const std::vector<Vec>& xi_curve) {
    const std::size_t m = times.size();
    const int nn = rs.n(), gd = rs.gdim();
    const auto& group = rs.action().group;
    const double s_side = rs.action().side == GroupAction::Side::Right ? 1.0 : -1.0;

    // Reduced Lagrangian l (no mu subtraction): evaluate through the lift.
    auto l_eval = [&](const Vec& x, const Vec& vx, const Vec& y, const Vec& xi) {
        ChartState s = rs.lift(x, vx, y, xi);
        return rs.full->L(s);
    };

    // Momentum F_xi l = j_l, base momentum dl/dvx, and base gradient dl/dx.
    std::vector<Vec> lam(m), pbase(m);
    for (std::size_t i = 0; i < m; ++i) {
        lam[i] = rs.j_l(x_curve[i], vx_curve[i], y_curve[i], xi_curve[i]);
        pbase[i] = nn > 0 ? Vec(fd_gradient(
                                [&](const Vec& v) {
                                    return l_eval(x_curve[i], v, y_curve[i], xi_curve[i]);
                                },
                                vx_curve[i]))
                          : Vec(Vec::Zero(0));
    }

    auto grid_dot = [&](const std::vector<Vec>& c, std::size_t i) -> Vec {
        if (i == 0) return (c[1] - c[0]) / (times[1] - times[0]);
        if (i + 1 == m) return (c[m - 1] - c[m - 2]) / (times[m - 1] - times[m - 2]);
        return (c[i + 1] - c[i - 1]) / (times[i + 1] - times[i - 1]);
    };

    LagrangePoincareResidual out;
    out.vertical.resize(m);
    out.horizontal.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        // Covariant derivative of the momentum in the section trivialization:
        // lambda-dot corrected by the coadjoint of omega along the section
        // velocity (zero for the built-in trivializations).
        Vec q_sec = rs.qchart.section(x_curve[i], y_curve[i]);
        Vec lamdot = grid_dot(lam, i);
        Vec corr = Vec::Zero(gd);
        if (nn > 0) {
            std::vector<Vec> qs(m);
            for (std::size_t j = 0; j < m; ++j)
                qs[j] = rs.qchart.section(x_curve[j], y_curve[j]);
            Vec w = rs.conn.omega(q_sec, grid_dot(qs, i));
            corr = -s_side * group.coad_star(w, lam[i]);
        }
        out.vertical[i] = lamdot + corr + s_side * group.coad_star(xi_curve[i], lam[i]);

        if (nn > 0) {
            Vec dldx = fd_gradient(
                [&](const Vec& xx) { return l_eval(xx, vx_curve[i], y_curve[i], xi_curve[i]); },
                x_curve[i]);
            Vec el_h = dldx - grid_dot(pbase, i);

            // Curvature force <F_xi l, i_xdot Omega-tilde>.
            Vec curv_force(nn);
            Vec xdot_lift = Vec::Zero(q_sec.size());
            for (int j = 0; j < nn; ++j)
                xdot_lift +=
                    vx_curve[i][j] * horizontal_lift(rs.conn, rs.qchart, Vec::Unit(nn, j), q_sec);
            for (int j = 0; j < nn; ++j) {
                Vec ej = horizontal_lift(rs.conn, rs.qchart, Vec::Unit(nn, j), q_sec);
                Vec Om = curvature(rs.conn, q_sec, xdot_lift, ej);
                curv_force[j] = lam[i].dot(rs.qchart.class_components(q_sec, Om));
            }
            Vec f = rs.f_reduced(x_curve[i], vx_curve[i], y_curve[i], xi_curve[i]);
            out.horizontal[i] = el_h - curv_force + f;
        } else {
            out.horizontal[i] = Vec::Zero(0);
        }
    }
    return out;
}

}  // namespace routh
