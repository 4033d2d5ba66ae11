#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include "fivebar/atlas.hpp"

namespace fivebar::io {

inline std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// One row per cell per working mode; `label` is the aspect id used in
// report.json, or -1.
inline void write_grid_csv(std::ostream& out, const Atlas& atlas) {
  out << "x,y,mode,feasible,detA_sign,label\n";
  int offset = 0;
  for (const auto& lf : atlas.fields) {
    const std::string mode = lf.field.mode.str();
    for (std::size_t k = 0; k < lf.field.cells.size(); ++k) {
      const auto& c = lf.field.cells[k];
      const int label = lf.labels[k] >= 0 ? offset + lf.labels[k] : -1;
      out << format_number(c.pose.x()) << ',' << format_number(c.pose.y()) << ',' << mode << ','
          << (c.feasible() ? 1 : 0) << ',' << c.det_a_sign << ',' << label << '\n';
    }
    offset += static_cast<int>(lf.aspects.size());
  }
}

}  // namespace fivebar::io
