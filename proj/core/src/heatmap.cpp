#include "ot/heatmap.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ot {

namespace {

constexpr int kCell = 64;
constexpr int kMarginLeft = 70;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 56;
constexpr int kBarWidth = 16;
constexpr int kBarGap = 28;
constexpr int kBarLabels = 90;

std::string fixed(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void check_matrix(const Matrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw DimensionMismatchError("heatmap needs a nonempty square matrix");
  }
  for (double v : m.data()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw OutOfRangeError("heatmap entries must be finite and within [0, 1]");
    }
  }
}

// White at 0, pure red at the matrix maximum.
std::string fill_color(double value, double max_value) {
  double t = max_value > 0.0 ? value / max_value : 0.0;
  int channel = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  std::ostringstream color;
  color << "rgb(255," << channel << "," << channel << ")";
  return color.str();
}

}  // namespace

std::string render_heatmap_svg(const Matrix& matrix, const std::string& title) {
  check_matrix(matrix);
  int k = matrix.rows();
  double max_value = 0.0;
  for (double v : matrix.data()) max_value = std::max(max_value, v);

  int grid = k * kCell;
  int width = kMarginLeft + grid + kBarGap + kBarWidth + kBarLabels;
  int height = kMarginTop + grid + kMarginBottom;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<style>text{font-family:sans-serif;font-size:12px;}"
         ".annot{text-anchor:middle;dominant-baseline:central;}"
         ".axis{text-anchor:middle;}.title{text-anchor:middle;font-size:14px;}</style>\n";
  svg << "<title>" << title << "</title>\n";
  svg << "<text class=\"title\" x=\"" << (kMarginLeft + grid / 2) << "\" y=\"20\">" << title
      << "</text>\n";

  // Cells: origin i runs top to bottom (reversed vertical axis), destination
  // j left to right.
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      int x = kMarginLeft + j * kCell;
      int y = kMarginTop + i * kCell;
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
          << kCell << "\" fill=\"" << fill_color(matrix.at(i, j), max_value)
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      svg << "<text class=\"annot\" x=\"" << (x + kCell / 2) << "\" y=\"" << (y + kCell / 2)
          << "\">" << fixed(matrix.at(i, j)) << "</text>\n";
    }
  }

  // Category ticks and axis names.
  for (int j = 0; j < k; ++j) {
    svg << "<text class=\"axis\" x=\"" << (kMarginLeft + j * kCell + kCell / 2) << "\" y=\""
        << (kMarginTop + grid + 18) << "\">" << (j + 1) << "</text>\n";
  }
  for (int i = 0; i < k; ++i) {
    svg << "<text x=\"" << (kMarginLeft - 16) << "\" y=\"" << (kMarginTop + i * kCell + kCell / 2)
        << "\" text-anchor=\"end\" dominant-baseline=\"central\">" << (i + 1) << "</text>\n";
  }
  svg << "<text class=\"axis\" x=\"" << (kMarginLeft + grid / 2) << "\" y=\""
      << (kMarginTop + grid + 40) << "\">destination category</text>\n";
  svg << "<text class=\"axis\" transform=\"translate(16," << (kMarginTop + grid / 2)
      << ") rotate(-90)\">origin category</text>\n";

  // Color bar, white at the bottom to red at the top.
  int bar_x = kMarginLeft + grid + kBarGap;
  svg << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
         "<stop offset=\"0\" stop-color=\"rgb(255,255,255)\"/>"
         "<stop offset=\"1\" stop-color=\"rgb(255,0,0)\"/></linearGradient></defs>\n";
  svg << "<rect x=\"" << bar_x << "\" y=\"" << kMarginTop << "\" width=\"" << kBarWidth
      << "\" height=\"" << grid << "\" fill=\"url(#scale)\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    double frac = tick / 4.0;
    int y = kMarginTop + static_cast<int>(std::lround(grid * (1.0 - frac)));
    svg << "<text x=\"" << (bar_x + kBarWidth + 6) << "\" y=\"" << y
        << "\" dominant-baseline=\"central\">" << fixed(max_value * frac) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_heatmap_ascii(const Matrix& matrix, const std::string& title) {
  check_matrix(matrix);
  int k = matrix.rows();
  std::ostringstream out;
  out << title << "\n";
  out << "origin \\ destination";
  for (int j = 0; j < k; ++j) out << "      " << (j + 1);
  out << "\n";
  for (int i = 0; i < k; ++i) {
    char label[32];
    std::snprintf(label, sizeof(label), "%19d ", i + 1);
    out << label;
    for (int j = 0; j < k; ++j) {
      out << "  " << fixed(matrix.at(i, j));
    }
    out << "\n";
  }
  return out.str();
}

void emit_heatmap(const Matrix& matrix, const std::string& title, const std::string& path,
                  HeatmapMode mode) {
  std::string content = mode == HeatmapMode::Svg ? render_heatmap_svg(matrix, title)
                                                 : render_heatmap_ascii(matrix, title);
  std::filesystem::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "'");
  }
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

}  // namespace ot
