#pragma once

#include <string>

#include "lagflow/jet.hpp"

namespace lagflow {

/// Two-panel SVG of the final slice: fixed 10-level contours of u and of
/// F(D^2u), marching on the grid cells; 2D grids only.
void write_contour_svg(const std::string& path, const Field& f, const JetField& jet);

}  // namespace lagflow
