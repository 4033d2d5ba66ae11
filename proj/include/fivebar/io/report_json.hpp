#pragma once

#include <string>

#include "json.hpp"

#include "fivebar/atlas.hpp"

namespace fivebar::io {

using nlohmann::json;

inline std::string pattern_letter(Sign s) { return s == Sign::Positive ? "P" : "N"; }

inline Sign letter_to_sign(const std::string& s) {
  if (s == "P") return Sign::Positive;
  if (s == "N") return Sign::Negative;
  throw ValidationError("sign", "expected P or N, got '" + s + "'");
}

inline json geometry_to_json(const Geometry& g) {
  return {{"l0", g.l0()}, {"l1", g.l1()}, {"l2", g.l2()}, {"l3", g.l3()}, {"l4", g.l4()}};
}

inline Geometry geometry_from_json(const json& j) {
  return Geometry(j.at("l0").get<double>(), j.at("l1").get<double>(), j.at("l2").get<double>(),
                  j.at("l3").get<double>(), j.at("l4").get<double>());
}

inline json grid_to_json(const GridSpec& g) {
  return {{"x_min", g.x_min},
          {"x_max", g.x_max},
          {"y_min", g.y_min},
          {"y_max", g.y_max},
          {"nx", g.nx},
          {"ny", g.ny},
          {"connectivity", static_cast<int>(g.connectivity)},
          {"min_component_fraction", g.min_component_fraction},
          {"min_component_cells", g.min_component_cells}};
}

inline GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.x_min = j.at("x_min").get<double>();
  g.x_max = j.at("x_max").get<double>();
  g.y_min = j.at("y_min").get<double>();
  g.y_max = j.at("y_max").get<double>();
  g.nx = j.at("nx").get<int>();
  g.ny = j.at("ny").get<int>();
  g.connectivity = j.at("connectivity").get<int>() == 8 ? Connectivity::Eight : Connectivity::Four;
  g.min_component_fraction = j.at("min_component_fraction").get<double>();
  g.min_component_cells = j.at("min_component_cells").get<int>();
  return g;
}

inline json report_to_json(const AspectReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"detA", pattern_letter(row.det_a)},
                    {"b11", pattern_letter(row.b11)},
                    {"b22", pattern_letter(row.b22)},
                    {"count", row.count}});
  json aspects = json::array();
  for (const auto& a : r.aspects)
    aspects.push_back({{"id", a.id},
                       {"mode", a.mode.str()},
                       {"sign", pattern_letter(a.sign)},
                       {"index", a.index},
                       {"cells", a.cells},
                       {"bbox", {a.bbox.x_min, a.bbox.y_min, a.bbox.x_max, a.bbox.y_max}}});
  return {{"geometry", geometry_to_json(r.geometry)},
          {"grid", grid_to_json(r.grid)},
          {"rows", rows},
          {"total", r.total},
          {"aspects", aspects},
          {"warnings", r.warnings}};
}

inline AspectReport report_from_json(const json& j) {
  AspectReport r;
  r.geometry = geometry_from_json(j.at("geometry"));
  r.grid = grid_from_json(j.at("grid"));
  for (const auto& row : j.at("rows"))
    r.rows.push_back({letter_to_sign(row.at("detA")), letter_to_sign(row.at("b11")), letter_to_sign(row.at("b22")),
                      row.at("count").get<int>()});
  r.total = j.at("total").get<int>();
  for (const auto& a : j.at("aspects")) {
    const auto& box = a.at("bbox");
    r.aspects.push_back({a.at("id").get<int>(), WorkingMode::parse(a.at("mode").get<std::string>()),
                         letter_to_sign(a.at("sign")), a.at("index").get<int>(), a.at("cells").get<std::size_t>(),
                         BoundingBox{box.at(0).get<double>(), box.at(1).get<double>(), box.at(2).get<double>(),
                                     box.at(3).get<double>()}});
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

inline std::string dump_report(const AspectReport& r) { return report_to_json(r).dump(2) + "\n"; }

}  // namespace fivebar::io
