#pragma once

#include <iosfwd>
#include <string>

#include "routh/chart.hpp"

namespace routh {

/// Writes a trajectory as CSV: columns t, all coordinates, all velocities
/// (d<name>), then diagnostics channels (E_L and J_L first, the rest in name
/// order; vector channels get _1.._k suffixes). 17 significant digits,
/// '.' decimal separator. Output is bit-stable for identical inputs.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Reads a trajectory written by write_trajectory_csv. The chart supplies
/// coordinate names; diagnostics channels are rebuilt from the header.
Trajectory read_trajectory_csv(const std::string& path, ChartPtr chart);

}  // namespace routh
