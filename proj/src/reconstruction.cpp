#include "routh/reconstruction.hpp"

#include <cmath>

#include "routh/interp.hpp"
#include "routh/ode.hpp"

namespace routh {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
    double w = std::fmod(a + kPi, 2.0 * kPi);
    if (w < 0) w += 2.0 * kPi;
    return w - kPi;
}

std::vector<Vec> unwrap_states(const Trajectory& tr, const std::vector<char>& angular) {
    std::vector<Vec> qs;
    qs.reserve(tr.size());
    for (const auto& s : tr.states) qs.push_back(s.q);
    for (std::size_t i = 1; i < qs.size(); ++i)
        for (int c = 0; c < qs[i].size(); ++c)
            if (c < static_cast<int>(angular.size()) && angular[c])
                qs[i][c] = qs[i - 1][c] + wrap_angle(qs[i][c] - qs[i - 1][c]);
    return qs;
}
}  // namespace

std::vector<Vec> horizontal_lift_curve(const PrincipalConnection& conn, const QuotientChart& qc,
                                       const std::vector<double>& times,
                                       const std::vector<Vec>& x_samples,
                                       const std::vector<Vec>& vx_samples, const Vec& q_a) {
    if (qc.n() > 0 && (qc.proj_x(q_a) - x_samples.front()).cwiseAbs().maxCoeff() > 1e-8)
        throw GaugeAnchorError("horizontal_lift_curve: anchor does not project to x(t0)");

    std::vector<Vec> out;
    out.reserve(times.size());
    out.push_back(q_a);
    if (qc.n() == 0) {  // trivial base: the horizontal curve is constant
        for (std::size_t i = 1; i < times.size(); ++i) out.push_back(q_a);
        return out;
    }

    CurveInterpolant vx_of_t(times, vx_samples);
    auto rhs = [&](double t, const Vec& q) { return horizontal_lift(conn, qc, vx_of_t(t), q); };
    Vec q = q_a;
    for (std::size_t i = 1; i < times.size(); ++i) {
        q = rk4_step(rhs, times[i - 1], q, times[i] - times[i - 1]);
        out.push_back(q);
    }
    (void)x_samples;
    return out;
}

std::vector<GroupElement> solve_group_ode(const LieGroup& group,
                                          const std::vector<double>& times,
                                          const std::vector<Vec>& xi_samples,
                                          GroupOdeFrame frame) {
    CurveInterpolant xi_of_t(times, xi_samples);
    std::vector<GroupElement> out;
    out.reserve(times.size());
    out.push_back(group.identity());

    if (group.kind != LieGroup::Kind::SO3) {
        // Abelian: quadrature of xi (frame irrelevant).
        auto rhs = [&](double t, const Vec&) { return xi_of_t(t); };
        Vec g = Vec::Zero(group.dim);
        for (std::size_t i = 1; i < times.size(); ++i) {
            g = rk4_step(rhs, times[i - 1], g, times[i] - times[i - 1]);
            out.push_back(GroupElement::from_vec(g));
        }
        return out;
    }

    auto rhs = [&](double t, const Vec& flat) {
        Eigen::Matrix3d R = Eigen::Map<const Eigen::Matrix3d>(flat.data());
        Eigen::Matrix3d W = so3::hat(Eigen::Vector3d(xi_of_t(t)));
        Eigen::Matrix3d dR = frame == GroupOdeFrame::Spatial ? (W * R).eval() : (R * W).eval();
        Vec out9(9);
        Eigen::Map<Eigen::Matrix3d>(out9.data()) = dR;
        return out9;
    };

    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
    for (std::size_t i = 1; i < times.size(); ++i) {
        Vec flat(9);
        Eigen::Map<Eigen::Matrix3d>(flat.data()) = R;
        flat = rk4_step(rhs, times[i - 1], flat, times[i] - times[i - 1]);
        R = so3::project(Eigen::Map<const Eigen::Matrix3d>(flat.data()));
        out.push_back(GroupElement::from_matrix(R));
    }
    return out;
}

Trajectory reconstruct(const ReducedSystem& rs, const Trajectory& reduced_traj, const Vec& q_a) {
    const int nn = rs.n(), kk = rs.k();
    const auto& qc = rs.qchart;
    const auto& action = rs.conn.action;

    std::vector<Vec> x_s, vx_s, y_s;
    for (const auto& s : reduced_traj.states) {
        x_s.push_back(s.q.head(nn));
        vx_s.push_back(s.v.head(nn));
        y_s.push_back(s.q.tail(kk));
    }
    const auto& xi_s = reduced_traj.channel("xi");

    if (kk > 0 && (qc.proj_y(q_a) - y_s.front()).cwiseAbs().maxCoeff() > 1e-8)
        throw GaugeAnchorError("reconstruct: anchor does not project to y(t0)");
    if (nn > 0 && (qc.proj_x(q_a) - x_s.front()).cwiseAbs().maxCoeff() > 1e-8)
        throw GaugeAnchorError("reconstruct: anchor does not project to x(t0)");

    std::vector<Vec> q_h =
        horizontal_lift_curve(rs.conn, qc, reduced_traj.times, x_s, vx_s, q_a);

    // Representatives of the adjoint classes along the horizontal curve.
    std::vector<Vec> xi_rep;
    xi_rep.reserve(q_h.size());
    for (std::size_t i = 0; i < q_h.size(); ++i)
        xi_rep.push_back(qc.class_representative(q_h[i], xi_s[i]));

    const GroupOdeFrame frame =
        action.side == GroupAction::Side::Right ? GroupOdeFrame::Spatial : GroupOdeFrame::Body;
    std::vector<GroupElement> g = solve_group_ode(action.group, reduced_traj.times, xi_rep, frame);

    Trajectory traj;
    traj.chart = rs.full->chart;
    traj.times = reduced_traj.times;
    std::vector<Vec> eL, jL, res_y, res_xi;
    for (std::size_t i = 0; i < q_h.size(); ++i) {
        Vec q = action.act(g[i], q_h[i]);
        Vec qdot_h = nn > 0 ? Vec(horizontal_lift(rs.conn, qc, vx_s[i], q_h[i]))
                            : Vec(Vec::Zero(q.size()));
        Vec v = action.act_jacobian_at(g[i], q_h[i]) * qdot_h;
        Vec zeta = action.side == GroupAction::Side::Right
                       ? action.group.Ad(action.group.inverse(g[i]), xi_rep[i])
                       : action.group.Ad(g[i], xi_rep[i]);
        v += action.generator(q, zeta);

        ChartState s(rs.full->chart, q, v);
        Vec e(1);
        e[0] = rs.full->energy(s);
        eL.push_back(e);
        jL.push_back(momentum_map(*rs.full, action, s));

        Vec ry(1), rxi(1);
        ry[0] = kk > 0 ? (qc.proj_y(q) - y_s[i]).cwiseAbs().maxCoeff() : 0.0;
        rxi[0] = (qc.class_components(q, rs.conn.omega(q, v)) - xi_s[i]).cwiseAbs().maxCoeff();
        res_y.push_back(ry);
        res_xi.push_back(rxi);

        traj.states.push_back(std::move(s));
    }
    traj.diagnostics["E_L"] = std::move(eL);
    traj.diagnostics["J_L"] = std::move(jL);
    traj.diagnostics["res_y"] = std::move(res_y);
    traj.diagnostics["res_xi"] = std::move(res_xi);
    traj.validate();
    return traj;
}

ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b,
                                      const TrajectoryMetric& metric) {
    if (a.chart->name != b.chart->name || a.chart->dim != b.chart->dim)
        throw ComparisonError("compare_trajectories: charts differ ('" + a.chart->name +
                              "' vs '" + b.chart->name + "')");
    const int dim = a.chart->dim;
    Vec w = metric.weights.size() ? metric.weights : Vec(Vec::Ones(dim));
    std::vector<char> ang = metric.angular;
    ang.resize(dim, 0);

    std::vector<Vec> qa = unwrap_states(a, ang);
    std::vector<Vec> qb_raw = unwrap_states(b, ang);

    const bool same_grid = a.times == b.times;
    CurveInterpolant qb_interp(b.times, qb_raw);

    ComparisonReport rep;
    std::vector<double> per(dim, 0.0);
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        Vec qb = same_grid ? qb_raw[i] : qb_interp(a.times[i]);
        for (int c = 0; c < dim; ++c) {
            double d = qa[i][c] - qb[c];
            if (ang[c]) d = wrap_angle(d);
            d = std::abs(d) * w[c];
            per[c] = std::max(per[c], d);
            rep.sup_error = std::max(rep.sup_error, d);
        }
    }
    for (int c = 0; c < dim; ++c) rep.per_channel[a.chart->coord_names[c]] = per[c];
    return rep;
}

}  // namespace routh
