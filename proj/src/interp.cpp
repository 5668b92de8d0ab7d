#include "routh/interp.hpp"

#include <algorithm>
#include <stdexcept>

namespace routh {

CurveInterpolant::CurveInterpolant(std::vector<double> times, std::vector<Vec> values)
    : t_(std::move(times)), v_(std::move(values)) {
    if (t_.size() != v_.size() || t_.empty())
        throw std::invalid_argument("CurveInterpolant: grid/value mismatch");
}

Vec CurveInterpolant::operator()(double t) const {
    const std::size_t m = t_.size();
    if (m == 1) return v_[0];
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t hi = static_cast<std::size_t>(std::distance(t_.begin(), it));
    if (hi == 0) hi = 1;
    if (hi >= m) hi = m - 1;
    std::size_t lo = hi - 1;

    // Stencil of up to four points around [lo, hi].
    std::size_t first = lo == 0 ? 0 : lo - 1;
    std::size_t last = std::min(m - 1, hi + 1);
    const std::size_t count = last - first + 1;

    Vec out = Vec::Zero(v_[0].size());
    for (std::size_t i = first; i <= last; ++i) {
        double w = 1.0;
        for (std::size_t j = first; j <= last; ++j) {
            if (i == j) continue;
            w *= (t - t_[j]) / (t_[i] - t_[j]);
        }
        out += w * v_[i];
    }
    (void)count;
    return out;
}

}  // namespace routh
