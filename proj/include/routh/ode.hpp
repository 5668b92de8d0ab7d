#pragma once

#include <functional>
#include <vector>

#include "routh/types.hpp"

namespace routh {

using OdeRhs = std::function<Vec(double, const Vec&)>;

struct OdeSolution {
    std::vector<double> times;
    std::vector<Vec> points;
};

/// Classical fixed-step RK4. The final time is hit exactly (the last step is
/// shortened). A non-finite right-hand side raises IntegrationBlowupError
/// carrying the last good time.
OdeSolution rk4(const OdeRhs& vf, const Vec& z0, double t0, double t1, double dt);

/// One RK4 step.
Vec rk4_step(const OdeRhs& vf, double t, const Vec& z, double h);

}  // namespace routh
