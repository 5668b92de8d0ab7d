#include "routh/csvio.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace routh {

namespace {

std::vector<std::string> channel_order(const Trajectory& traj) {
    std::vector<std::string> names;
    if (traj.diagnostics.count("E_L")) names.push_back("E_L");
    if (traj.diagnostics.count("J_L")) names.push_back("J_L");
    for (const auto& [name, ch] : traj.diagnostics) {
        (void)ch;
        if (name != "E_L" && name != "J_L") names.push_back(name);
    }
    return names;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << std::setprecision(17);
    os << "t";
    for (const auto& c : traj.chart->coord_names) os << "," << c;
    for (const auto& c : traj.chart->coord_names) os << ",d" << c;
    auto names = channel_order(traj);
    for (const auto& name : names) {
        const auto& ch = traj.diagnostics.at(name);
        const auto width = ch.empty() ? 0 : ch.front().size();
        if (width == 1)
            os << "," << name;
        else
            for (Eigen::Index i = 0; i < width; ++i) os << "," << name << "_" << (i + 1);
    }
    os << "\n";

    for (std::size_t r = 0; r < traj.size(); ++r) {
        os << traj.times[r];
        const auto& s = traj.states[r];
        for (int i = 0; i < s.q.size(); ++i) os << "," << s.q[i];
        for (int i = 0; i < s.v.size(); ++i) os << "," << s.v[i];
        for (const auto& name : names) {
            const Vec& val = traj.diagnostics.at(name)[r];
            for (int i = 0; i < val.size(); ++i) os << "," << val[i];
        }
        os << "\n";
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_trajectory_csv(f, traj);
}

Trajectory read_trajectory_csv(const std::string& path, ChartPtr chart) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty CSV '" + path + "'");

    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) cols.push_back(item);
    }
    const int dim = chart->dim;
    if (static_cast<int>(cols.size()) < 1 + 2 * dim)
        throw std::runtime_error("CSV '" + path + "' has too few columns for chart '" +
                                 chart->name + "'");

    // Group the trailing diagnostic columns back into channels.
    struct Channel {
        std::string name;
        int first_col;
        int width;
    };
    std::vector<Channel> channels;
    for (std::size_t c = 1 + 2 * dim; c < cols.size(); ++c) {
        std::string base = cols[c];
        auto us = base.find_last_of('_');
        bool is_component = false;
        if (us != std::string::npos && us + 1 < base.size()) {
            is_component = base.find_first_not_of("0123456789", us + 1) == std::string::npos;
            if (is_component) base = base.substr(0, us);
        }
        if (is_component && !channels.empty() && channels.back().name == base)
            channels.back().width += 1;
        else
            channels.push_back({base, static_cast<int>(c), 1});
    }

    Trajectory traj;
    traj.chart = chart;
    for (const auto& ch : channels) traj.diagnostics[ch.name] = {};
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string item;
        std::vector<double> row;
        while (std::getline(ss, item, ',')) row.push_back(std::stod(item));
        if (row.size() != cols.size())
            throw std::runtime_error("CSV '" + path + "': ragged row");
        traj.times.push_back(row[0]);
        Vec q(dim), v(dim);
        for (int i = 0; i < dim; ++i) q[i] = row[1 + i];
        for (int i = 0; i < dim; ++i) v[i] = row[1 + dim + i];
        traj.states.emplace_back(chart, q, v);
        for (const auto& ch : channels) {
            Vec val(ch.width);
            for (int i = 0; i < ch.width; ++i) val[i] = row[ch.first_col + i];
            traj.diagnostics[ch.name].push_back(val);
        }
    }
    traj.validate();
    return traj;
}

}  // namespace routh
