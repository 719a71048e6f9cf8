// Heatmap rendering for K x K matrices: SVG with a white-to-red scale,
// origin categories down the vertical axis (row 1 at the top), destination
// categories along the horizontal axis, numeric annotations to 3 decimals
// and a color bar; or a fixed-width ASCII grid of the same numbers.

#pragma once

#include <string>

#include "ot/types.hpp"

namespace ot {

enum class HeatmapMode { Svg, Ascii };

std::string render_heatmap_svg(const Matrix& matrix, const std::string& title);
std::string render_heatmap_ascii(const Matrix& matrix, const std::string& title);

// Renders and writes atomically (temp file, then rename).
void emit_heatmap(const Matrix& matrix, const std::string& title, const std::string& path,
                  HeatmapMode mode);

}  // namespace ot
