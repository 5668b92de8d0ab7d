#pragma once

#include "routh/quotient.hpp"

namespace routh {

/// R^mu(v_q) = L(v_q) - <mu, omega(q)(v_q)> on the full chart.
struct Routhian {
    SystemPtr sys;
    PrincipalConnection conn;
    Vec mu;

    double eval(const ChartState& s) const {
        return sys->L(s) - mu.dot(conn.omega(s.q, s.v));
    }
};

/// Momentum map of the Routhian with respect to the full G-action, computed
/// as an independent fibre derivative of R^mu (not as J_L - mu; the identity
/// between the two is a test target).
Vec routhian_momentum(const Routhian& r, const ChartState& s);

/// The gyroscopic force G^mu(v_q) = -i_{v_q} d omega^mu.
Vec gyro_force_full(const Routhian& r, const ChartState& s);

}  // namespace routh
