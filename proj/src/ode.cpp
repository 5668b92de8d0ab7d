#include "routh/ode.hpp"

#include <cmath>

namespace routh {

namespace {
Vec eval_rhs(const OdeRhs& vf, double t, const Vec& z, double last_good) {
    Vec f = vf(t, z);
    if (!f.allFinite())
        throw IntegrationBlowupError("vector field returned non-finite values at t=" +
                                         std::to_string(t) + "; last good time " +
                                         std::to_string(last_good),
                                     last_good);
    return f;
}
}  // namespace

Vec rk4_step(const OdeRhs& vf, double t, const Vec& z, double h) {
    Vec k1 = eval_rhs(vf, t, z, t);
    Vec k2 = eval_rhs(vf, t + 0.5 * h, z + 0.5 * h * k1, t);
    Vec k3 = eval_rhs(vf, t + 0.5 * h, z + 0.5 * h * k2, t);
    Vec k4 = eval_rhs(vf, t + h, z + h * k3, t);
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

OdeSolution rk4(const OdeRhs& vf, const Vec& z0, double t0, double t1, double dt) {
    if (!(t1 > t0)) throw std::invalid_argument("rk4: require t1 > t0");
    if (!(dt > 0)) throw std::invalid_argument("rk4: require dt > 0");

    const double span = t1 - t0;
    // Number of full-length steps; a shortened trailing step lands on t1 exactly.
    auto n_full = static_cast<long>(std::floor(span / dt * (1.0 + 1e-12)));
    if (n_full > 0 && t0 + static_cast<double>(n_full) * dt >= t1) --n_full;

    OdeSolution out;
    out.times.reserve(static_cast<std::size_t>(n_full) + 2);
    out.points.reserve(static_cast<std::size_t>(n_full) + 2);
    out.times.push_back(t0);
    out.points.push_back(z0);

    Vec z = z0;
    for (long i = 0; i < n_full; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        z = rk4_step(vf, t, z, dt);
        if (!z.allFinite())
            throw IntegrationBlowupError("state became non-finite; last good time " +
                                             std::to_string(t), t);
        out.times.push_back(t0 + static_cast<double>(i + 1) * dt);
        out.points.push_back(z);
    }
    const double t_last = t0 + static_cast<double>(n_full) * dt;
    if (t_last < t1) {
        z = rk4_step(vf, t_last, z, t1 - t_last);
        if (!z.allFinite())
            throw IntegrationBlowupError("state became non-finite; last good time " +
                                             std::to_string(t_last), t_last);
        out.times.push_back(t1);
        out.points.push_back(z);
    }
    return out;
}

}  // namespace routh
