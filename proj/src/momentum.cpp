#include "routh/momentum.hpp"

#include <cmath>

#include "routh/numdiff.hpp"

namespace routh {

Vec momentum_map(const LagrangianSystem& sys, const GroupAction& action, const ChartState& s) {
    Vec p = sys.dLdv(s);
    Mat G = action.generator_matrix(s.q);
    return G.transpose() * p;
}

InvarianceReport check_invariance(const LagrangianSystem& sys, const GroupAction& action,
                                  const StateSampler& sampler, int n_samples,
                                  std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    InvarianceReport rep;

    const int gd = action.group.dim;
    int done = 0, attempts = 0;
    while (done < n_samples && attempts < 20 * n_samples) {
        ++attempts;
        ChartState s = sampler(rng);
        Vec xi(gd);
        for (int i = 0; i < gd; ++i) xi[i] = unit(rng);
        GroupElement g = action.group.exp(xi);

        // Skip group elements that push the sample into a chart singularity.
        Vec qg = action.act(g, s.q);
        if (s.chart->is_singular(qg)) continue;
        ++done;

        ChartState sg = action.act_tangent(g, s);
        rep.max_L_violation = std::max(rep.max_L_violation, std::abs(sys.L(sg) - sys.L(s)));

        if (!sys.F.is_zero()) {
            Vec w(s.chart->dim);
            for (int i = 0; i < w.size(); ++i) w[i] = unit(rng);
            Mat J = action.act_jacobian_at(g, s.q);
            const double lhs = sys.F.eval(sg).dot(J * w);
            const double rhs = sys.F.eval(s).dot(w);
            rep.max_F1_violation = std::max(rep.max_F1_violation, std::abs(lhs - rhs));

            Vec Fv = sys.F.eval(s);
            Mat Gq = action.generator_matrix(s.q);
            for (int i = 0; i < gd; ++i)
                rep.max_F2_violation =
                    std::max(rep.max_F2_violation, std::abs(Fv.dot(Gq.col(i))));
        }
    }
    rep.L_invariant = rep.max_L_violation <= tol;
    rep.F_cond1 = rep.max_F1_violation <= tol;
    rep.F_cond2 = rep.max_F2_violation <= tol;
    return rep;
}

Vec momentum_drift(const Trajectory& traj) {
    const auto& j = traj.channel("J_L");
    if (j.empty()) return Vec();
    Vec j0 = j.front();
    Vec drift = Vec::Zero(j0.size());
    for (const auto& jt : j)
        drift = drift.cwiseMax((jt - j0).cwiseAbs());
    return drift;
}

Mat locked_inertia(const LagrangianSystem& sys, const GroupAction& action, const ChartState& s) {
    const int gd = action.group.dim;
    Mat G = action.generator_matrix(s.q);
    Mat I(gd, gd);
    for (int j = 0; j < gd; ++j) {
        Vec eta_Q = G.col(j);
        auto jl = [&](double tau) {
            ChartState st(s.chart, s.q, s.v + tau * eta_Q);
            return momentum_map(sys, action, st);
        };
        const double h = fd_step(0.0);
        I.col(j) = (jl(h) - jl(-h)) / (2.0 * h);
    }
    return I;
}

Mat isotropy_subalgebra(const LieGroup& group, const Vec& mu) {
    const int n = group.dim;
    Mat K(n, n);
    for (int i = 0; i < n; ++i) K.col(i) = group.coad_star(Vec::Unit(n, i), mu);
    Eigen::JacobiSVD<Mat> svd(K, Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

ChartState project_to_momentum(const LagrangianSystem& sys, const GroupAction& action,
                               const ChartState& s, const Vec& mu, int max_iter) {
    ChartState cur = s;
    for (int it = 0; it < max_iter; ++it) {
        Vec r = momentum_map(sys, action, cur) - mu;
        if (r.cwiseAbs().maxCoeff() < 1e-13) break;
        Mat I = locked_inertia(sys, action, cur);
        Vec dxi = I.colPivHouseholderQr().solve(-r);
        cur.v += action.generator_matrix(cur.q) * dxi;
    }
    return cur;
}

}  // namespace routh
