#include "routh/routhian.hpp"

#include "routh/numdiff.hpp"

namespace routh {

Vec routhian_momentum(const Routhian& r, const ChartState& s) {
    const auto& action = r.conn.action;
    Mat G = action.generator_matrix(s.q);
    Vec out(action.group.dim);
    for (int i = 0; i < action.group.dim; ++i) {
        Vec dir = G.col(i);
        out[i] = fd_directional(
            [&](const Vec& v) { return r.eval(ChartState(s.chart, s.q, v)); }, s.v, dir);
    }
    return out;
}

Vec gyro_force_full(const Routhian& r, const ChartState& s) {
    Mat D = r.conn.d_omega_mu(s.q, r.mu);
    // -i_v d omega^mu: components -(D^T v)_j = (D v)_j.
    return D * s.v;
}

}  // namespace routh
