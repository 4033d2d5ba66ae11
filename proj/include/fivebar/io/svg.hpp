#pragma once

#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fivebar/atlas.hpp"
#include "fivebar/io/grid_csv.hpp"

namespace fivebar::io {

struct PlotStyle {
  // Indexed like table_row_order(): PPP PPN PNN PNP NPN NPP NNP NNN.
  std::array<std::string, 8> colors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  std::string unlabeled_fill = "#e6e6e6";
  std::string serial_stroke = "#000000";
  std::string parallel_stroke = "#b00020";
  double stroke_width = 1.5;
  double px_per_unit = 40.0;
  int joint_panel_px = 480;
  int joint_bins = 256;

  void validate() const {
    std::set<std::string> distinct(colors.begin(), colors.end());
    if (distinct.size() != colors.size()) throw ValidationError("colors", "the 8 pattern colours must be distinct");
    if (!(px_per_unit > 0.0)) throw ValidationError("px_per_unit", "must be positive");
    if (joint_panel_px < 16 || joint_bins < 2) throw ValidationError("joint_panel_px", "joint panel too small");
  }
};

inline int pattern_index(int det_a_sign, const WorkingMode& mode) {
  const auto order = table_row_order();
  const Sign s = det_a_sign > 0 ? Sign::Positive : Sign::Negative;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (order[k][0] == s && order[k][1] == mode[0] && order[k][2] == mode[1]) return static_cast<int>(k);
  return -1;
}

namespace detail {

// Horizontal runs of equal colour index (-1 = empty) drawn as rectangles.
inline void emit_runs(std::ostringstream& svg, const std::vector<int>& colour, int nx, int ny, double x0, double y_top,
                      double cw, double ch, const PlotStyle& style) {
  for (int j = 0; j < ny; ++j) {
    int i = 0;
    while (i < nx) {
      const int c = colour[static_cast<std::size_t>(j) * nx + i];
      int end = i + 1;
      while (end < nx && colour[static_cast<std::size_t>(j) * nx + end] == c) ++end;
      if (c != -1) {
        const std::string& fill = c >= 0 ? style.colors[c] : style.unlabeled_fill;
        // Row j counts upward from the bottom of the panel.
        svg << "<rect x=\"" << format_number(x0 + i * cw) << "\" y=\"" << format_number(y_top - (j + 1) * ch)
            << "\" width=\"" << format_number((end - i) * cw) << "\" height=\"" << format_number(ch) << "\" fill=\""
            << fill << "\"/>\n";
      }
      i = end;
    }
  }
}

}  // namespace detail

// Workspace view (left) and joint-space view (right) for one working mode.
// Feasible cells outside every aspect are drawn in `unlabeled_fill`.
inline std::string render_mode_svg(const LabeledField& lf, const SingularityLoci& loci, const Geometry& g,
                                   const PlotStyle& style = {}) {
  style.validate();
  const GridSpec& grid = lf.field.grid;
  const double s = style.px_per_unit;
  const double ws_w = (grid.x_max - grid.x_min) * s;
  const double ws_h = (grid.y_max - grid.y_min) * s;
  const double gap = 40.0;
  const double jp = style.joint_panel_px;
  const double jx0 = ws_w + gap;
  const double height = std::max(ws_h, jp + 40.0);
  const double width = jx0 + jp + 20.0;

  auto sx = [&](double x) { return (x - grid.x_min) * s; };
  auto sy = [&](double y) { return (grid.y_max - y) * s; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  svg << "<!-- working mode " << lf.field.mode.str() << "; workspace panel is y-up, 1 length unit = "
      << format_number(s) << " px, origin at base joint A; joint panel spans (-pi, pi] on both axes -->\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_number(width)
      << "\" height=\"" << format_number(height) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << format_number(width) << "\" height=\"" << format_number(height)
      << "\" fill=\"#ffffff\"/>\n";

  // Workspace cells.
  std::vector<int> colour(grid.cells(), -1);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    const auto& c = lf.field.cells[k];
    if (lf.labels[k] >= 0) colour[k] = pattern_index(c.det_a_sign, lf.field.mode);
    else if (c.feasible()) colour[k] = -2;
  }
  svg << "<g id=\"workspace\">\n";
  detail::emit_runs(svg, colour, grid.nx, grid.ny, 0.0, ws_h, grid.dx() * s, grid.dy() * s, style);

  auto polyline = [&](const Polyline& line, const std::string& stroke, double ox, auto&& mapx, auto&& mapy) {
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << format_number(style.stroke_width)
        << "\" points=\"";
    for (const auto& p : line) svg << format_number(ox + mapx(p.x())) << ',' << format_number(mapy(p.y())) << ' ';
    svg << "\"/>\n";
  };
  for (const auto& line : loci.serial_curves) polyline(line, style.serial_stroke, 0.0, sx, sy);
  for (const auto& line : loci.parallel_curves) polyline(line, style.parallel_stroke, 0.0, sx, sy);

  // Base frame: A, B and the base line.
  svg << "<line x1=\"" << format_number(sx(0.0)) << "\" y1=\"" << format_number(sy(0.0)) << "\" x2=\""
      << format_number(sx(g.l0())) << "\" y2=\"" << format_number(sy(0.0))
      << "\" stroke=\"#000000\" stroke-width=\"3\"/>\n";
  for (const auto& [p, name] : {std::pair{g.a(), "A"}, std::pair{g.b(), "B"}}) {
    svg << "<circle cx=\"" << format_number(sx(p.x())) << "\" cy=\"" << format_number(sy(p.y()))
        << "\" r=\"5\" fill=\"#000000\"/>\n";
    svg << "<text x=\"" << format_number(sx(p.x()) + 6) << "\" y=\"" << format_number(sy(p.y()) + 16)
        << "\" font-size=\"14\">" << name << "</text>\n";
  }
  svg << "</g>\n";

  // Joint space: member q values binned on the torus.
  const int bins = style.joint_bins;
  std::vector<int> jcolour(static_cast<std::size_t>(bins) * bins, -1);
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    if (lf.labels[k] < 0) continue;
    const auto& q = *lf.field.cells[k].q;
    auto bin = [&](double t) { return std::clamp(static_cast<int>(std::floor((t + pi) / two_pi * bins)), 0, bins - 1); };
    jcolour[static_cast<std::size_t>(bin(q.theta2)) * bins + bin(q.theta1)] =
        pattern_index(lf.field.cells[k].det_a_sign, lf.field.mode);
  }
  const double jy0 = 20.0;
  svg << "<g id=\"jointspace\">\n";
  svg << "<rect x=\"" << format_number(jx0) << "\" y=\"" << format_number(jy0) << "\" width=\"" << format_number(jp)
      << "\" height=\"" << format_number(jp) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  detail::emit_runs(svg, jcolour, bins, bins, jx0, jy0 + jp, jp / bins, jp / bins, style);
  svg << "<text x=\"" << format_number(jx0 + jp / 2) << "\" y=\"" << format_number(jy0 + jp + 16)
      << "\" font-size=\"14\">theta1</text>\n";
  svg << "<text x=\"" << format_number(jx0 - 36) << "\" y=\"" << format_number(jy0 + jp / 2)
      << "\" font-size=\"14\">theta2</text>\n";
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace fivebar::io
