#include "routh/chart.hpp"

namespace routh {

ChartPtr make_chart(std::string name, std::vector<std::string> coord_names,
                    std::function<bool(const Vec&)> singular_region) {
    auto c = std::make_shared<Chart>();
    c->name = std::move(name);
    c->coord_names = std::move(coord_names);
    c->dim = static_cast<int>(c->coord_names.size());
    c->singular_region = std::move(singular_region);
    return c;
}

ChartState::ChartState(ChartPtr c, Vec q_, Vec v_)
    : chart(std::move(c)), q(std::move(q_)), v(std::move(v_)) {
    if (q.size() != chart->dim || v.size() != chart->dim)
        throw std::invalid_argument("ChartState: q/v size must equal chart dim for chart '" +
                                    chart->name + "'");
}

void ChartState::require_nonsingular() const {
    if (chart->is_singular(q))
        throw ChartSingularityError("state inside singular region of chart '" + chart->name + "'");
}

void Trajectory::validate() const {
    if (times.size() != states.size())
        throw std::logic_error("Trajectory: times/states length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::logic_error("Trajectory: times not strictly increasing");
    for (const auto& s : states)
        if (s.chart.get() != chart.get())
            throw std::logic_error("Trajectory: state chart mismatch");
    for (const auto& [name, ch] : diagnostics)
        if (ch.size() != times.size())
            throw std::logic_error("Trajectory: diagnostics channel '" + name + "' length mismatch");
}

const std::vector<Vec>& Trajectory::channel(const std::string& name) const {
    auto it = diagnostics.find(name);
    if (it == diagnostics.end())
        throw DiagnosticsMissingError("trajectory has no diagnostics channel '" + name + "'");
    return it->second;
}

}  // namespace routh
