#include "routh/quotient.hpp"

#include <cmath>

#include "routh/numdiff.hpp"

namespace routh {

Mat QuotientChart::proj_x_jacobian(const Vec& q) const {
    if (dproj_x) return dproj_x(q);
    return fd_jacobian(proj_x, q);
}

Mat QuotientChart::proj_y_jacobian(const Vec& q) const {
    if (dproj_y) return dproj_y(q);
    return fd_jacobian(proj_y, q);
}

Vec horizontal_lift(const PrincipalConnection& conn, const QuotientChart& qc, const Vec& v_x,
                    const Vec& q) {
    const int D = static_cast<int>(q.size());
    const int n = qc.n();
    const int gd = conn.action.group.dim;
    if (n + gd != D)
        throw std::logic_error("horizontal_lift: base dim + group dim must equal chart dim");
    Mat A(D, D);
    A.topRows(n) = qc.proj_x_jacobian(q);
    A.bottomRows(gd) = conn.coefficients(q);
    Vec b(D);
    b.head(n) = v_x;
    b.tail(gd).setZero();
    Vec u = A.partialPivLu().solve(b);
    if ((A * u - b).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff()))
        throw NumericalDomainError("horizontal_lift: lift system is singular at this point");
    return u;
}

ReducedPoint quotient_coords(const PrincipalConnection& conn, const QuotientChart& qc,
                             const ChartState& s) {
    s.require_nonsingular();
    ReducedPoint r;
    r.x = qc.proj_x(s.q);
    r.vx = qc.proj_x_jacobian(s.q) * s.v;
    r.y = qc.proj_y(s.q);
    r.xi = qc.class_components(s.q, conn.omega(s.q, s.v));
    return r;
}

ChartState assemble(const PrincipalConnection& conn, const QuotientChart& qc, ChartPtr full_chart,
                    const ReducedPoint& r, const GroupElement* gauge) {
    Vec q = qc.section(r.x, r.y);
    if (gauge) q = conn.action.act(*gauge, q);
    if (full_chart->is_singular(q))
        throw ChartSingularityError("assemble: section point is singular in chart '" +
                                    full_chart->name + "'");
    Vec xi = qc.class_representative(q, r.xi);
    Vec v = conn.action.generator(q, xi);
    if (qc.n() > 0) v += horizontal_lift(conn, qc, r.vx, q);
    return ChartState(full_chart, std::move(q), std::move(v));
}

Vec mu_tilde(const QuotientChart& qc, const Vec& mu, const Vec& x, const Vec& y) {
    Vec q = qc.section(x, y);
    Vec out(qc.xi_dim);
    for (int a = 0; a < qc.xi_dim; ++a)
        out[a] = mu.dot(qc.class_representative(q, Vec::Unit(qc.xi_dim, a)));
    return out;
}

BetaBlocks beta_mu_blocks(const PrincipalConnection& conn, const QuotientChart& qc, const Vec& mu,
                          const Vec& x, const Vec& y) {
    const Vec q = qc.section(x, y);
    const Mat D = conn.d_omega_mu(q, mu);
    const int n = qc.n();
    const int gd = conn.action.group.dim;

    Mat H(q.size(), n);
    for (int i = 0; i < n; ++i)
        H.col(i) = horizontal_lift(conn, qc, Vec::Unit(n, i), q);
    Mat G(q.size(), gd);
    for (int a = 0; a < gd; ++a)
        G.col(a) = conn.action.generator(q, qc.class_representative(q, Vec::Unit(gd, a)));

    BetaBlocks out;
    out.omega_mu = H.transpose() * D * H;
    out.ad_star_block = G.transpose() * D * G;
    Mat hv = H.transpose() * D * G;
    out.max_hv = hv.size() ? hv.cwiseAbs().maxCoeff() : 0.0;
    return out;
}

Mat beta_mu_matrix(const PrincipalConnection& conn, const QuotientChart& qc, const Vec& mu,
                   const Vec& x, const Vec& y) {
    const Vec q = qc.section(x, y);
    const Mat D = conn.d_omega_mu(q, mu);
    const int n = qc.n(), k = qc.k();

    // Lift each (x, y) coordinate direction to T_qQ: solve the projection
    // equations; the kernel freedom (G_mu directions) does not matter since
    // d omega^mu annihilates it.
    Mat P(n + k, q.size());
    P.topRows(n) = qc.proj_x_jacobian(q);
    P.bottomRows(k) = qc.proj_y_jacobian(q);
    Mat lifts = P.transpose() * (P * P.transpose()).partialPivLu().solve(
                                    Mat::Identity(n + k, n + k));
    return lifts.transpose() * D * lifts;
}

std::vector<Vec> covariant_derivative(const PrincipalConnection& conn,
                                      const std::vector<double>& times,
                                      const std::vector<Vec>& q_curve,
                                      const std::vector<Vec>& e_curve) {
    const std::size_t m = times.size();
    if (q_curve.size() != m || e_curve.size() != m || m < 2)
        throw std::invalid_argument("covariant_derivative: need matching grids of length >= 2");

    auto grid_dot = [&](const std::vector<Vec>& c, std::size_t i) -> Vec {
        if (i == 0) return (c[1] - c[0]) / (times[1] - times[0]);
        if (i + 1 == m) return (c[m - 1] - c[m - 2]) / (times[m - 1] - times[m - 2]);
        return (c[i + 1] - c[i - 1]) / (times[i + 1] - times[i - 1]);
    };

    const double sgn = conn.action.side == GroupAction::Side::Right ? 1.0 : -1.0;
    std::vector<Vec> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        Vec qdot = grid_dot(q_curve, i);
        Vec edot = grid_dot(e_curve, i);
        Vec w = conn.omega(q_curve[i], qdot);
        out[i] = edot + sgn * conn.action.group.bracket(w, e_curve[i]);
    }
    return out;
}

}  // namespace routh
