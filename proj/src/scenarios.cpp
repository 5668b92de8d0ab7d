#include "routh/scenarios.hpp"

#include <chrono>
#include <cmath>

#include "routh/numdiff.hpp"

namespace routh {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Trajectory run_simulate(const SystemBundle& b, const ChartState& s0, double t0, double t1,
                        double dt) {
    IntegrateOptions opts;
    opts.action = &b.action;
    return integrate_full(*b.sys, s0, t0, t1, dt, opts);
}

Trajectory project_trajectory(const ReducedSystem& rs, const Trajectory& full) {
    Trajectory out;
    out.chart = rs.reduced_chart;
    out.times = full.times;
    std::vector<Vec> xi_ch;
    for (const auto& s : full.states) {
        ReducedPoint r = quotient_coords(rs.conn, rs.qchart, s);
        Vec q(rs.n() + rs.k()), v(rs.n() + rs.k());
        // The y-velocity of the projected curve comes from the pi_mu tangent map.
        Vec ydot = rs.qchart.proj_y_jacobian(s.q) * s.v;
        q << r.x, r.y;
        v << r.vx, ydot;
        out.states.emplace_back(rs.reduced_chart, q, v);
        xi_ch.push_back(r.xi);
    }
    out.diagnostics["xi"] = std::move(xi_ch);
    out.validate();
    return out;
}

ReduceCompareReport run_reduce_compare(const SystemBundle& b, const Vec& mu, double t0, double t1,
                                       double dt) {
    ReduceCompareReport rep;
    rep.system = b.name;
    rep.mu = mu;

    ChartState s0 = project_to_momentum(*b.sys, b.action, b.default_initial, mu);
    rep.momentum_projection_defect =
        (momentum_map(*b.sys, b.action, s0) - mu).cwiseAbs().maxCoeff();
    if (rep.momentum_projection_defect > 1e-8)
        throw ConstraintViolationError(
            "initial momentum defect " + std::to_string(rep.momentum_projection_defect) +
            " exceeds 1e-8 after projection");

    ReducedSystem rs = b.make_reduced(&mu);
    rep.g_regular = g_regularity_test(rs).is_regular;

    auto clock0 = std::chrono::steady_clock::now();
    Trajectory full = run_simulate(b, s0, t0, t1, dt);
    rep.runtime_full_s = seconds_since(clock0);
    rep.momentum_drift_full = momentum_drift(full);

    Trajectory projected = project_trajectory(rs, full);

    if (rep.g_regular) {
        RegularReducedSystem rr = regular_reduce(rs);
        ReducedPoint init = quotient_coords(rs.conn, rs.qchart, s0);

        clock0 = std::chrono::steady_clock::now();
        Trajectory reduced = integrate_reduced(rr, init, t0, t1, dt);
        rep.runtime_reduced_s = seconds_since(clock0);

        rep.sup_error_reduced =
            compare_trajectories(projected, reduced, b.reduced_metric).sup_error;
        for (const auto& r : reduced.channel("res_momentum"))
            rep.momentum_residual_reduced = std::max(rep.momentum_residual_reduced, r[0]);

        Trajectory rebuilt = reconstruct(rs, reduced, s0.q);
        rep.sup_error_reconstructed =
            compare_trajectories(full, rebuilt, b.full_metric).sup_error;

        PresymplecticProblem P = presymplectic_problem(rr);
        rep.presymplectic_residual_sup = presymplectic_residual_along(P, reduced, 64);
    } else {
        rep.has_pointwise_check = true;
        PresymplecticProblem P = presymplectic_problem(rs);
        ReducedPoint on = quotient_coords(rs.conn, rs.qchart, s0);
        Vec m_on(rs.k() + rs.gdim());
        m_on << on.y, on.xi;
        PointwiseCheck c_on = pointwise_constraint_check(P, {on.x, on.vx, m_on});
        rep.on_constraint_solvable = c_on.solvable;
        rep.kernel_dim = c_on.kernel_dim;

        ReducedPoint off = on;
        off.vx = on.vx.size() ? Vec(on.vx.array() + 0.37) : on.vx;
        Vec m_off(rs.k() + rs.gdim());
        m_off << off.y, off.xi;
        PointwiseCheck c_off = pointwise_constraint_check(P, {off.x, off.vx, m_off});
        rep.off_constraint_solvable = c_off.solvable;

        FibredSystem fs = rs.fibred();
        std::mt19937_64 rng(0);
        auto sampler = [&]() {
            ReducedPoint r = rs.sample_point(rng);
            Vec q(fs.total_chart->dim), v(fs.total_chart->dim);
            q << r.x, r.y, r.xi;
            v.setZero();
            v.head(rs.n()) = r.vx;
            return ChartState(fs.total_chart, q, v);
        };
        if (classify_constraint(fs, sampler) == ConstraintClass::Linear) {
            rep.has_linear_path = true;
            ReducedPoint init = quotient_coords(rs.conn, rs.qchart, s0);
            Vec xb(rs.n()), vb(rs.n());
            xb = init.x;
            vb = init.vx;
            clock0 = std::chrono::steady_clock::now();
            Trajectory constrained = solve_linear_constrained(
                fs, ChartState(rs.qchart.x_chart, xb, vb), t0, t1, dt);
            rep.runtime_reduced_s = seconds_since(clock0);

            // Compare against the base part of the projected full trajectory.
            Trajectory base_of_full;
            base_of_full.chart = rs.qchart.x_chart;
            base_of_full.times = projected.times;
            for (const auto& s : projected.states)
                base_of_full.states.emplace_back(rs.qchart.x_chart, Vec(s.q.head(rs.n())),
                                                 Vec(s.v.head(rs.n())));
            rep.linear_constrained_sup_error =
                compare_trajectories(base_of_full, constrained).sup_error;
        }
    }
    return rep;
}

Trajectory run_reconstruct(const SystemBundle& b, const Vec& mu, double t0, double t1,
                           double dt) {
    ChartState s0 = project_to_momentum(*b.sys, b.action, b.default_initial, mu);
    ReducedSystem rs = b.make_reduced(&mu);
    RegularReducedSystem rr = regular_reduce(rs);
    ReducedPoint init = quotient_coords(rs.conn, rs.qchart, s0);
    Trajectory reduced = integrate_reduced(rr, init, t0, t1, dt);
    return reconstruct(rs, reduced, s0.q);
}

CheckReport run_check(const SystemBundle& b, std::uint64_t seed) {
    CheckReport rep;
    rep.system = b.name;
    std::mt19937_64 rng(seed);

    auto push = [&](const std::string& name, double measured, double threshold) {
        rep.entries.push_back({name, measured <= threshold, measured, threshold});
    };

    // Invariance of (L, F).
    InvarianceReport inv = check_invariance(*b.sys, b.action, b.sample_state, 20, seed);
    push("L_invariant", inv.max_L_violation, 1e-8);
    push("force_condition_1", inv.max_F1_violation, 1e-8);
    push("force_condition_2", inv.max_F2_violation, 1e-8);

    // Analytic partials versus finite differences.
    double partials_defect = 0.0;
    if (b.sys->partials) {
        LagrangianSystem plain{b.sys->chart, b.sys->L, b.sys->F, std::nullopt};
        for (int i = 0; i < 50; ++i) {
            ChartState s = b.sample_state(rng);
            partials_defect = std::max(
                partials_defect,
                (b.sys->dLdq(s) - plain.dLdq(s)).cwiseAbs().maxCoeff());
            partials_defect = std::max(
                partials_defect,
                (b.sys->dLdv(s) - plain.dLdv(s)).cwiseAbs().maxCoeff());
        }
    }
    push("analytic_partials_vs_fd", partials_defect, 1e-6);

    // Connection axioms.
    double conn_defect = 0.0;
    try {
        validate_connection(b.default_connection, b.sample_state, 10, seed);
    } catch (const NotInvariantError&) {
        conn_defect = 1.0;
    }
    push("connection_axioms", conn_defect, 1e-8);

    // Generator linearity.
    double lin_defect = 0.0;
    {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            ChartState s = b.sample_state(rng);
            const int gd = b.action.group.dim;
            Vec xi(gd), eta(gd);
            for (int j = 0; j < gd; ++j) { xi[j] = u(rng); eta[j] = u(rng); }
            const double a = u(rng), c = u(rng);
            Vec lhs = b.action.generator(s.q, a * xi + c * eta);
            Vec rhs = a * b.action.generator(s.q, xi) + c * b.action.generator(s.q, eta);
            lin_defect = std::max(lin_defect, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    push("generator_linearity", lin_defect, 1e-12);

    // Generator consistency with the action: fd of act(exp(t xi), q).
    double gen_defect = 0.0;
    {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        int done = 0, tries = 0;
        while (done < 10 && tries < 100) {
            ++tries;
            ChartState s = b.sample_state(rng);
            const int gd = b.action.group.dim;
            Vec xi(gd);
            for (int j = 0; j < gd; ++j) xi[j] = u(rng);
            const double h = 1e-6;
            Vec qp = b.action.act(b.action.group.exp(h * xi), s.q);
            Vec qm = b.action.act(b.action.group.exp(-h * xi), s.q);
            if (s.chart->is_singular(qp) || s.chart->is_singular(qm)) continue;
            ++done;
            Vec fd = (qp - qm) / (2.0 * h);
            gen_defect =
                std::max(gen_defect, (fd - b.action.generator(s.q, xi)).cwiseAbs().maxCoeff());
        }
    }
    push("generator_matches_action", gen_defect, 1e-6);

    // Quotient round trip.
    ReducedSystem rs = b.make_reduced();
    double rt_defect = 0.0;
    for (int i = 0; i < 20; ++i) {
        ReducedPoint r = rs.sample_point(rng);
        ChartState s = rs.lift(r.x, r.vx, r.y, r.xi);
        ReducedPoint r2 = quotient_coords(rs.conn, rs.qchart, s);
        double d = 0.0;
        if (r.x.size()) d = std::max(d, (r.x - r2.x).cwiseAbs().maxCoeff());
        if (r.vx.size()) d = std::max(d, (r.vx - r2.vx).cwiseAbs().maxCoeff());
        if (r.y.size()) d = std::max(d, (r.y - r2.y).cwiseAbs().maxCoeff());
        d = std::max(d, (r.xi - r2.xi).cwiseAbs().maxCoeff());
        rt_defect = std::max(rt_defect, d);
    }
    push("quotient_round_trip", rt_defect, 1e-10);

    // beta^mu mixed block.
    double hv_defect = 0.0;
    for (int i = 0; i < 10; ++i) {
        ReducedPoint r = rs.sample_point(rng);
        hv_defect = std::max(hv_defect, rs.beta_blocks(r.x, r.y).max_hv);
    }
    push("beta_horizontal_vertical_block", hv_defect, 1e-8);

    // G-regularity flag.
    const bool greg = g_regularity_test(rs).is_regular;
    push("g_regularity_as_expected", greg == b.expected_g_regular ? 0.0 : 1.0, 0.5);

    // Short conservation run.
    {
        Trajectory tr = run_simulate(b, b.default_initial, 0.0, 1.0, 1e-3);
        Vec drift = momentum_drift(tr);
        push("momentum_drift_short_run", drift.cwiseAbs().maxCoeff(), 1e-7);
        const auto& e = tr.channel("E_L");
        if (b.sys->F.is_zero()) {
            double edrift = 0.0;
            for (const auto& ei : e) edrift = std::max(edrift, std::abs(ei[0] - e.front()[0]));
            push("energy_drift_conservative", edrift, 1e-7);
        } else {
            double max_increase = 0.0;
            for (std::size_t i = 1; i < e.size(); ++i)
                max_increase = std::max(max_increase, e[i][0] - e[i - 1][0]);
            push("energy_monotone_dissipative", max_increase, 1e-12);
        }
    }
    return rep;
}

}  // namespace routh
