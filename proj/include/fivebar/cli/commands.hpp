#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fivebar/atlas.hpp"
#include "fivebar/io/config.hpp"
#include "fivebar/io/grid_csv.hpp"
#include "fivebar/io/report_json.hpp"
#include "fivebar/io/svg.hpp"
#include "fivebar/kinematics.hpp"
#include "fivebar/singularity.hpp"

namespace fivebar::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kIo = 3 };

using nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json config_record(const FullConfig& cfg, const Tolerances& tol) {
  const auto m = matrices(cfg);
  json flags = json::array();
  if (cfg.has(kTangent)) flags.push_back("Tangent");
  if (cfg.has(kLeg1BoundaryPosture)) flags.push_back("Leg1BoundaryPosture");
  if (cfg.has(kLeg2BoundaryPosture)) flags.push_back("Leg2BoundaryPosture");
  auto mode = try_working_mode_of(cfg, tol);
  return {{"p", {cfg.p.x(), cfg.p.y()}},
          {"q", {cfg.q.theta1, cfg.q.theta2}},
          {"passive", {cfg.passive.theta3, cfg.passive.theta4}},
          {"A", {{m.a(0, 0), m.a(0, 1)}, {m.a(1, 0), m.a(1, 1)}}},
          {"B", {{m.b(0, 0), m.b(0, 1)}, {m.b(1, 0), m.b(1, 1)}}},
          {"detA", det_a(m)},
          {"detB", det_b(m)},
          {"mode", mode ? json(mode->str()) : json(nullptr)},
          {"class", std::string(to_string(classify_singularity(cfg, tol)))},
          {"residual", closure_residual(cfg)},
          {"flags", flags}};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

inline std::string mode_file_stem(const WorkingMode& m) {
  std::string s = "mode_";
  for (Sign x : m.signs()) s.push_back(x == Sign::Positive ? 'p' : 'm');
  return s;
}

// Writes the selected artifacts for `cfg` into cfg.output_dir and returns the
// report.
inline AspectReport run_atlas(const io::RunConfig& cfg, std::vector<std::string>* written = nullptr) {
  const Atlas atlas = compute_atlas(cfg.geometry, cfg.grid, cfg.atlas_options());
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir + ": " + ec.message());
  const std::filesystem::path dir(cfg.output_dir);
  auto note = [&](const std::filesystem::path& p) {
    if (written) written->push_back(p.string());
  };

  if (cfg.formats.contains(io::OutputFormat::Json)) {
    write_file(dir / "report.json", io::dump_report(atlas.report));
    note(dir / "report.json");
  }
  if (cfg.formats.contains(io::OutputFormat::Csv)) {
    std::ostringstream csv;
    io::write_grid_csv(csv, atlas);
    write_file(dir / "grid.csv", csv.str());
    note(dir / "grid.csv");
  }
  if (cfg.formats.contains(io::OutputFormat::Svg)) {
    for (const auto& lf : atlas.fields) {
      const auto loci = singularity_loci(lf.field, cfg.geometry);
      const auto path = dir / (mode_file_stem(lf.field.mode) + ".svg");
      write_file(path, io::render_mode_svg(lf, loci, cfg.geometry));
      note(path);
    }
  }
  return atlas.report;
}

// Accepts "p"/"m" as well as "+"/"-", since "--" and "-+" read like flags on
// a command line.
inline WorkingMode parse_mode_arg(std::string text) {
  for (char& ch : text) {
    if (ch == 'p' || ch == 'P') ch = '+';
    else if (ch == 'm' || ch == 'M' || ch == 'n' || ch == 'N') ch = '-';
  }
  return WorkingMode::parse(text);
}

inline Sign parse_assembly_arg(const std::string& text) {
  if (text == "p" || text == "P") return Sign::Positive;
  if (text == "m" || text == "M" || text == "n") return Sign::Negative;
  return parse_sign(text);
}

inline std::vector<int> parse_postures(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("postures", "not an integer: '" + item + "'");
    }
  }
  return out;
}

// Entry point shared by the fivebar executable and the CLI tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Five-bar working modes, singularities and generalized aspects"};
  app.require_subcommand(1);
  app.fallthrough();

  std::vector<double> lengths;
  std::string config_path;
  bool degrees = false;
  app.add_option("--geometry", lengths, "Link lengths l0 l1 l2 l3 l4")->expected(5);
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_flag("--degrees", degrees, "Interpret and print angles in degrees");

  double theta1 = 0, theta2 = 0, x = 0, y = 0;
  std::string assembly = "+", mode_text = "++";

  auto* fk = app.add_subcommand("fk", "Forward kinematics for one assembly mode");
  fk->add_option("--theta1", theta1)->required();
  fk->add_option("--theta2", theta2)->required();
  fk->add_option("--assembly", assembly, "+ or -");

  auto* ik = app.add_subcommand("ik", "Inverse kinematics in one working mode");
  ik->add_option("--x", x)->required();
  ik->add_option("--y", y)->required();
  ik->add_option("--mode", mode_text, "++, +-, -+ or --");

  auto* classify = app.add_subcommand("classify", "Singularity class of a configuration");
  std::optional<double> c_t1, c_t2, c_x, c_y;
  classify->add_option("--theta1", c_t1);
  classify->add_option("--theta2", c_t2);
  classify->add_option("--assembly", assembly);
  classify->add_option("--x", c_x);
  classify->add_option("--y", c_y);
  classify->add_option("--mode", mode_text);

  auto* atlas = app.add_subcommand("atlas", "Enumerate generalized aspects and write report, grid and plots");
  std::string out_dir, formats;
  std::optional<int> n, nx, ny;
  unsigned workers = 0;
  bool no_stability = false;
  atlas->add_option("--out", out_dir, "Output directory");
  atlas->add_option("--n", n, "Cells per axis");
  atlas->add_option("--nx", nx);
  atlas->add_option("--ny", ny);
  atlas->add_option("--workers", workers);
  atlas->add_option("--formats", formats, "Comma list of json,csv,svg");
  atlas->add_flag("--no-stability-check", no_stability);

  auto* modes = app.add_subcommand("modes", "Count working modes from postures per leg");
  int legs = 0;
  std::string postures;
  modes->add_option("--legs", legs, "Number of legs with two postures each");
  modes->add_option("--postures", postures, "Comma list of postures per leg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto to_rad = [&](double v) { return degrees ? degrees_to_radians(v) : v; };
  const auto from_rad = [&](double v) { return degrees ? radians_to_degrees(v) : v; };
  auto emit = [&](json record) {
    if (degrees && record.contains("q")) {
      for (auto& v : record["q"]) v = from_rad(v.get<double>());
      for (auto& v : record["passive"]) v = from_rad(v.get<double>());
    }
    out << record.dump(2) << "\n";
  };
  auto fail = [&](const KinematicError& e) {
    out << json{{"error", std::string(to_string(e.kind()))}, {"detail", e.what()}}.dump(2) << "\n";
    return kInfeasible;
  };

  try {
    io::RunConfig cfg;
    if (!config_path.empty()) cfg = io::parse_config(read_file(config_path));
    if (!lengths.empty()) {
      cfg.geometry = Geometry(lengths[0], lengths[1], lengths[2], lengths[3], lengths[4]);
      cfg.tolerances = Tolerances::for_geometry(cfg.geometry);
      cfg.grid = default_grid(cfg.geometry, cfg.grid.nx);
    }
    const Geometry& g = cfg.geometry;
    const Tolerances& tol = cfg.tolerances;

    if (*fk) {
      const AssemblyMode am{parse_assembly_arg(assembly)};
      const auto cfg_fk = forward_kinematics(g, JointConfig(to_rad(theta1), to_rad(theta2)), am, tol);
      json rec = config_record(cfg_fk, tol);
      rec["assembly"] = std::string(1, sign_char(am.sign));
      emit(rec);
      return kOk;
    }
    if (*ik) {
      emit(config_record(inverse_kinematics(g, Point2(x, y), parse_mode_arg(mode_text), tol), tol));
      return kOk;
    }
    if (*classify) {
      if (c_t1 && c_t2) {
        emit(config_record(
            forward_kinematics(g, JointConfig(to_rad(*c_t1), to_rad(*c_t2)), AssemblyMode{parse_assembly_arg(assembly)}, tol),
            tol));
      } else if (c_x && c_y) {
        // Serial-singular poses are still classifiable: build them without the mode check.
        const auto mode = parse_mode_arg(mode_text);
        const auto leg1 = leg_ik(g.a(), g.l1(), g.l2(), Point2(*c_x, *c_y), mode[0], tol.residual, tol.angular);
        const auto leg2 = leg_ik(g.b(), g.l3(), g.l4(), Point2(*c_x, *c_y), mode[1], tol.residual, tol.angular);
        std::uint8_t flags = (leg1.boundary_posture ? kLeg1BoundaryPosture : 0) |
                             (leg2.boundary_posture ? kLeg2BoundaryPosture : 0);
        FullConfig c{g, JointConfig(leg1.actuated, leg2.actuated), PassiveAngles(leg1.passive, leg2.passive),
                     Point2(*c_x, *c_y), flags};
        emit(config_record(c, tol));
      } else {
        err << "classify needs --theta1/--theta2 or --x/--y\n";
        return kUsage;
      }
      return kOk;
    }
    if (*atlas) {
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (n) cfg.grid = cfg.grid.with_resolution(*n, *n);
      if (nx) cfg.grid.nx = *nx;
      if (ny) cfg.grid.ny = *ny;
      if (workers > 0) cfg.workers = workers;
      if (no_stability) cfg.check_stability = false;
      if (!formats.empty()) {
        // Reuse the config parser's format handling.
        std::ostringstream text;
        text << "l0 = 1\nl1 = 1\nl2 = 1\nl3 = 1\nl4 = 1\nformats = " << formats << "\n";
        cfg.formats = io::parse_config(text.str()).formats;
      }
      cfg.grid.validate();
      std::vector<std::string> written;
      const auto report = run_atlas(cfg, &written);
      json rows = io::report_to_json(report)["rows"];
      out << json{{"total", report.total}, {"rows", rows}, {"warnings", report.warnings}, {"files", written}}.dump(2)
          << "\n";
      return kOk;
    }
    if (*modes) {
      std::vector<int> per_leg;
      if (!postures.empty()) per_leg = parse_postures(postures);
      else if (legs > 0) per_leg.assign(static_cast<std::size_t>(legs), 2);
      else {
        err << "modes needs --postures or --legs\n";
        return kUsage;
      }
      const auto e = enumerate_working_modes(per_leg);
      json rec{{"count", e.count}, {"modes", e.modes}};
      if (std::all_of(per_leg.begin(), per_leg.end(), [](int p) { return p == 2; })) {
        json signs = json::array();
        for (const auto& m : e.modes) signs.push_back(mode_from_indices(m).str());
        rec["signs"] = signs;
      }
      out << rec.dump(2) << "\n";
      return kOk;
    }
  } catch (const KinematicError& e) {
    return fail(e);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const io::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace fivebar::cli
