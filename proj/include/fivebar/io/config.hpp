#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "fivebar/atlas.hpp"
#include "fivebar/errors.hpp"
#include "fivebar/geometry.hpp"

namespace fivebar::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class OutputFormat { Json, Csv, Svg };

struct RunConfig {
  Geometry geometry = Geometry::reference();
  GridSpec grid = default_grid(Geometry::reference());
  Tolerances tolerances = Tolerances::for_geometry(Geometry::reference());
  std::string output_dir = "atlas";
  std::set<OutputFormat> formats{OutputFormat::Json, OutputFormat::Csv, OutputFormat::Svg};
  unsigned workers = 1;
  bool check_stability = true;

  AtlasOptions atlas_options() const { return {tolerances, workers, check_stability}; }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(std::string_view v, int line) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParseError(line, "not a number: '" + std::string(v) + "'");
  return out;
}

inline long to_integer(std::string_view v, int line) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParseError(line, "not an integer: '" + std::string(v) + "'");
  return out;
}

inline bool to_bool(std::string_view v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(line, "not a boolean: '" + std::string(v) + "'");
}

}  // namespace detail

// Known keys, in the order they are documented.
inline const std::set<std::string, std::less<>>& config_keys() {
  static const std::set<std::string, std::less<>> keys{
      "l0", "l1", "l2", "l3", "l4", "n", "nx", "ny", "x_min", "x_max", "y_min", "y_max", "connectivity",
      "min_component_fraction", "min_component_cells", "eps_a", "eps_b", "residual_tol", "output_dir",
      "formats", "workers", "check_stability"};
  return keys;
}

// Flat `key = value` lines; '#' starts a comment. Only the five lengths are
// required, everything else defaults from the geometry.
inline RunConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry, std::less<>> entries;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value', got '" + raw + "'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (!config_keys().contains(key)) throw ParseError(line_no, "unknown key '" + key + "' in '" + raw + "'");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    if (!entries.emplace(key, Entry{value, line_no}).second) throw ParseError(line_no, "duplicate key '" + key + "'");
  }

  auto num = [&](std::string_view key) -> std::optional<double> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return detail::to_double(it->second.value, it->second.line);
  };
  auto integer = [&](std::string_view key) -> std::optional<long> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return detail::to_integer(it->second.value, it->second.line);
  };

  double len[5];
  const char* names[5] = {"l0", "l1", "l2", "l3", "l4"};
  for (int k = 0; k < 5; ++k) {
    auto v = num(names[k]);
    if (!v) throw ValidationError(names[k], "required length is missing");
    len[k] = *v;
  }

  RunConfig cfg;
  cfg.geometry = Geometry(len[0], len[1], len[2], len[3], len[4]);
  cfg.tolerances = Tolerances::for_geometry(cfg.geometry);

  const long n = integer("n").value_or(512);
  cfg.grid = default_grid(cfg.geometry, static_cast<int>(n));
  if (auto v = integer("nx")) cfg.grid.nx = static_cast<int>(*v);
  if (auto v = integer("ny")) cfg.grid.ny = static_cast<int>(*v);
  if (auto v = num("x_min")) cfg.grid.x_min = *v;
  if (auto v = num("x_max")) cfg.grid.x_max = *v;
  if (auto v = num("y_min")) cfg.grid.y_min = *v;
  if (auto v = num("y_max")) cfg.grid.y_max = *v;
  if (auto v = integer("connectivity")) {
    if (*v == 4) cfg.grid.connectivity = Connectivity::Four;
    else if (*v == 8) cfg.grid.connectivity = Connectivity::Eight;
    else throw ValidationError("connectivity", "must be 4 or 8");
  }
  if (auto v = num("min_component_fraction")) cfg.grid.min_component_fraction = *v;
  if (auto v = integer("min_component_cells")) cfg.grid.min_component_cells = static_cast<int>(*v);
  cfg.grid.validate();

  auto positive = [&](std::string_view key, double& slot) {
    if (auto v = num(key)) {
      if (!(*v > 0.0) || !std::isfinite(*v)) throw ValidationError(std::string(key), "tolerance must be positive");
      slot = *v;
    }
  };
  positive("eps_a", cfg.tolerances.eps_a);
  positive("eps_b", cfg.tolerances.eps_b);
  positive("residual_tol", cfg.tolerances.residual);

  if (auto it = entries.find("output_dir"); it != entries.end()) cfg.output_dir = it->second.value;
  if (auto it = entries.find("formats"); it != entries.end()) {
    cfg.formats.clear();
    std::string_view rest = it->second.value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = detail::trim(rest.substr(0, comma));
      if (item == "json") cfg.formats.insert(OutputFormat::Json);
      else if (item == "csv") cfg.formats.insert(OutputFormat::Csv);
      else if (item == "svg") cfg.formats.insert(OutputFormat::Svg);
      else if (!item.empty()) throw ParseError(it->second.line, "unknown format '" + std::string(item) + "'");
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (cfg.formats.empty()) throw ValidationError("formats", "at least one output format is required");
  }
  if (auto v = integer("workers")) {
    if (*v < 1) throw ValidationError("workers", "must be at least 1");
    cfg.workers = static_cast<unsigned>(*v);
  }
  if (auto it = entries.find("check_stability"); it != entries.end())
    cfg.check_stability = detail::to_bool(it->second.value, it->second.line);
  return cfg;
}

}  // namespace fivebar::io
