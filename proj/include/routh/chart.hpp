#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "routh/types.hpp"

namespace routh {

/// A named coordinate chart. `singular_region`, when set, marks loci where
/// the chart breaks down (e.g. Euler-angle poles); it must be a pure predicate.
struct Chart {
    std::string name;
    int dim = 0;
    std::vector<std::string> coord_names;
    std::function<bool(const Vec&)> singular_region;

    bool is_singular(const Vec& q) const {
        return singular_region && singular_region(q);
    }
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::string name, std::vector<std::string> coord_names,
                    std::function<bool(const Vec&)> singular_region = nullptr);

/// A point plus velocity in a chart: the numerical stand-in for a tangent vector.
struct ChartState {
    ChartPtr chart;
    Vec q;
    Vec v;

    ChartState() = default;
    ChartState(ChartPtr c, Vec q_, Vec v_);

    void require_nonsingular() const;
};

/// Time grid, states and named per-sample diagnostics channels.
struct Trajectory {
    ChartPtr chart;
    std::vector<double> times;
    std::vector<ChartState> states;
    std::map<std::string, std::vector<Vec>> diagnostics;

    std::size_t size() const { return times.size(); }

    /// Monotone times, matching lengths, shared chart. Producers call this
    /// before handing a trajectory back.
    void validate() const;

    const std::vector<Vec>& channel(const std::string& name) const;
};

}  // namespace routh
