#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "feasib/experiment/runner.hpp"

namespace feasib::experiment {

/// Self-contained SVG of both set boundaries with the x and y iterate paths on top.
/// Geometry sits in a y-flipped group, so coordinates are problem units. Markers carry
/// ids "x-start", "x-end", "y-start" and "y-end". Throws UnsupportedOperation unless the
/// instance is 2D.
std::string render_svg(const InstanceConfig& config, const std::vector<TraceRow>& trace);

void render_figure(const std::filesystem::path& trace_csv, const InstanceConfig& config,
                   const std::filesystem::path& svg_out);

}  // namespace feasib::experiment
