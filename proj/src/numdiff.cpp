#include "routh/numdiff.hpp"

#include <cmath>
#include <limits>

namespace routh {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kStep1 = std::cbrt(kEps);
const double kStep2 = std::pow(kEps, 0.25);

double checked(double value, const char* what) {
    if (!std::isfinite(value))
        throw NumericalDomainError(std::string("non-finite value while evaluating ") + what);
    return value;
}
}  // namespace

double fd_step(double component) { return kStep1 * std::max(1.0, std::abs(component)); }
double fd_step2(double component) { return kStep2 * std::max(1.0, std::abs(component)); }

Vec fd_gradient(const ScalarFn& f, const Vec& p, double h_override) {
    Vec g(p.size());
    Vec x = p;
    for (int i = 0; i < p.size(); ++i) {
        const double h = h_override > 0 ? h_override : fd_step(p[i]);
        x[i] = p[i] + h;
        const double fp = checked(f(x), "fd_gradient");
        x[i] = p[i] - h;
        const double fm = checked(f(x), "fd_gradient");
        x[i] = p[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

double fd_directional(const ScalarFn& f, const Vec& p, const Vec& d) {
    const double scale = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0) return 0.0;
    const double h = kStep1 / scale * std::max(1.0, p.size() ? p.cwiseAbs().maxCoeff() : 1.0);
    const double fp = checked(f(p + h * d), "fd_directional");
    const double fm = checked(f(p - h * d), "fd_directional");
    return (fp - fm) / (2.0 * h);
}

Mat fd_jacobian(const VectorFn& f, const Vec& p, double h_override) {
    const Eigen::Index rows = f(p).size();
    Mat J(rows, p.size());
    Vec x = p;
    for (int j = 0; j < p.size(); ++j) {
        const double h = h_override > 0 ? h_override : fd_step(p[j]);
        x[j] = p[j] + h;
        Vec fp = f(x);
        x[j] = p[j] - h;
        Vec fm = f(x);
        x[j] = p[j];
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    if (!J.allFinite()) throw NumericalDomainError("non-finite value in fd_jacobian");
    return J;
}

Mat fd_hessian(const ScalarFn& f, const Vec& p, double h_override) {
    const int n = static_cast<int>(p.size());
    Mat H(n, n);
    const double f0 = checked(f(p), "fd_hessian");
    Vec x = p;
    for (int i = 0; i < n; ++i) {
        const double hi = h_override > 0 ? h_override : fd_step2(p[i]);
        x[i] = p[i] + hi;
        const double fp = checked(f(x), "fd_hessian");
        x[i] = p[i] - hi;
        const double fm = checked(f(x), "fd_hessian");
        x[i] = p[i];
        H(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (int j = i + 1; j < n; ++j) {
            const double hj = h_override > 0 ? h_override : fd_step2(p[j]);
            x[i] = p[i] + hi; x[j] = p[j] + hj;
            const double fpp = checked(f(x), "fd_hessian");
            x[j] = p[j] - hj;
            const double fpm = checked(f(x), "fd_hessian");
            x[i] = p[i] - hi;
            const double fmm = checked(f(x), "fd_hessian");
            x[j] = p[j] + hj;
            const double fmp = checked(f(x), "fd_hessian");
            x[i] = p[i]; x[j] = p[j];
            H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
        }
    }
    return H;
}

Mat fd_exterior_derivative(const VectorFn& alpha, const Vec& q) {
    Mat B = fd_jacobian(alpha, q);  // B(j, i) = d_i alpha_j
    Mat D = B.transpose() - B;      // D(i, j) = d_i alpha_j - d_j alpha_i
    return D;
}

}  // namespace routh
