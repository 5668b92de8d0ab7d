#pragma once

#include <functional>

#include "routh/types.hpp"

namespace routh {

using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;

/// Central-difference step for first derivatives: cbrt(eps) * max(1, |c|).
double fd_step(double component);
/// Step for second derivatives: eps^(1/4) * max(1, |c|).
double fd_step2(double component);

/// Componentwise central-difference gradient (f(p+h e_i) - f(p-h e_i)) / 2h.
/// h_override > 0 fixes the step for every component.
Vec fd_gradient(const ScalarFn& f, const Vec& p, double h_override = 0.0);

/// Directional derivative d/de f(p + e d) at e=0.
double fd_directional(const ScalarFn& f, const Vec& p, const Vec& d);

/// Jacobian of a vector map, column j = df/dp_j.
Mat fd_jacobian(const VectorFn& f, const Vec& p, double h_override = 0.0);

/// Full symmetric Hessian of a scalar function. h_override > 0 fixes the
/// step; larger steps suppress roundoff when testing for vanishing second
/// derivatives.
Mat fd_hessian(const ScalarFn& f, const Vec& p, double h_override = 0.0);

/// Antisymmetrized coefficient derivatives of a one-form alpha (given by its
/// coefficient map q -> alpha(q)): D_ij = d_i alpha_j - d_j alpha_i, so that
/// (d alpha)(u, w) = u^T D w.
Mat fd_exterior_derivative(const VectorFn& alpha, const Vec& q);

}  // namespace routh
