#pragma once

#include <filesystem>
#include <vector>

#include "rac/simulate.hpp"

namespace rac {

// Static SVG figures: tracking_error.svg (||e|| vs t, all controllers
// overlaid) and trajectories.svg (q paths against the reference curve, axes
// covering at least the reference extents). Returns the written paths; an
// empty log list writes nothing.
std::vector<std::filesystem::path> emit_plots(const std::vector<TrajectoryLog>& logs,
                                              const std::filesystem::path& out_dir,
                                              double extent_x, double extent_y);

}  // namespace rac
