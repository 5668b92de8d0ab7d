#pragma once

#include <vector>

#include "routh/types.hpp"

namespace routh {

/// Piecewise cubic interpolation (4-point Lagrange) of a sampled vector curve
/// on a strictly increasing grid; clamped to quadratic/linear near the ends.
class CurveInterpolant {
  public:
    CurveInterpolant(std::vector<double> times, std::vector<Vec> values);
    Vec operator()(double t) const;

  private:
    std::vector<double> t_;
    std::vector<Vec> v_;
};

}  // namespace routh
