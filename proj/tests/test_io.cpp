#include <gtest/gtest.h>

#include <sstream>

#include "fivebar/io/config.hpp"
#include "fivebar/io/grid_csv.hpp"
#include "fivebar/io/report_json.hpp"
#include "fivebar/io/svg.hpp"

using namespace fivebar;
using namespace fivebar::io;

namespace {

const char* kMinimal = "l0 = 9\nl1 = 8\nl2 = 5\nl3 = 5\nl4 = 8\n";

Atlas small_atlas() {
  const auto g = Geometry::reference();
  return compute_atlas(g, default_grid(g, 48), AtlasOptions{Tolerances::for_geometry(g), 1, false});
}

}  // namespace

TEST(Config, MinimalFileFillsDefaults) {
  const auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.geometry, Geometry::reference());
  EXPECT_EQ(cfg.grid, default_grid(Geometry::reference()));
  EXPECT_EQ(cfg.tolerances, Tolerances::for_geometry(Geometry::reference()));
  EXPECT_EQ(cfg.formats.size(), 3u);
  EXPECT_EQ(cfg.workers, 1u);
  EXPECT_TRUE(cfg.check_stability);
}

TEST(Config, CommentsOverridesAndFormats) {
  const auto cfg = parse_config(std::string(kMinimal) +
                                "# resolution\n  n = 256  \nny = 128 # rows\nconnectivity = 8\neps_a = 1e-6\n"
                                "formats = json, csv\noutput_dir = out/run1\nworkers = 4\ncheck_stability = false\n");
  EXPECT_EQ(cfg.grid.nx, 256);
  EXPECT_EQ(cfg.grid.ny, 128);
  EXPECT_EQ(cfg.grid.connectivity, Connectivity::Eight);
  EXPECT_EQ(cfg.tolerances.eps_a, 1e-6);
  EXPECT_EQ(cfg.formats, (std::set<OutputFormat>{OutputFormat::Json, OutputFormat::Csv}));
  EXPECT_EQ(cfg.output_dir, "out/run1");
  EXPECT_EQ(cfg.workers, 4u);
  EXPECT_FALSE(cfg.check_stability);
}

TEST(Config, ZeroLengthNamesTheField) {
  try {
    parse_config("l0 = 9\nl1 = 0\nl2 = 5\nl3 = 5\nl4 = 8\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "l1");
  }
  try {
    parse_config("l0 = 9\nl2 = 5\nl3 = 5\nl4 = 8\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "l1");
  }
}

TEST(Config, UnknownKeyReportsLine) {
  try {
    parse_config(std::string(kMinimal) + "\nspeed = 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7);
    EXPECT_NE(std::string(e.what()).find("speed = 3"), std::string::npos);
  }
  EXPECT_THROW(parse_config("l0 9\n"), ParseError);
  EXPECT_THROW(parse_config("l0 = nine\n"), ParseError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "l0 = 9\n"), ParseError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "formats = pdf\n"), ParseError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "eps_b = -1\n"), ValidationError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "nx = 1\n"), ValidationError);
}

TEST(ReportJson, RoundTripsFieldForField) {
  const auto atlas = small_atlas();
  AspectReport r = atlas.report;
  r.warnings.push_back("ResolutionUnstable: test");
  const auto parsed = report_from_json(json::parse(dump_report(r)));
  EXPECT_EQ(parsed, r);
}

TEST(ReportJson, SchemaKeys) {
  const auto j = report_to_json(small_atlas().report);
  for (const char* key : {"geometry", "grid", "rows", "total", "aspects", "warnings"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(j["rows"].size(), 8u);
  EXPECT_EQ(j["rows"][0]["detA"], "P");
  EXPECT_EQ(j["rows"][7]["b22"], "N");
  for (const auto& a : j["aspects"]) {
    for (const char* key : {"id", "mode", "sign", "cells", "bbox"}) EXPECT_TRUE(a.contains(key));
    EXPECT_EQ(a["bbox"].size(), 4u);
  }
}

TEST(GridCsv, HeaderAndRowCount) {
  const auto atlas = small_atlas();
  std::ostringstream out;
  write_grid_csv(out, atlas);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,mode,feasible,detA_sign,label");
  std::size_t rows = 0;
  std::set<int> labels;
  while (std::getline(in, line)) {
    ++rows;
    labels.insert(std::stoi(line.substr(line.rfind(',') + 1)));
  }
  EXPECT_EQ(rows, 48u * 48u * 4u);
  // Labels are the report's aspect ids plus -1.
  EXPECT_EQ(labels.size(), atlas.report.aspects.size() + 1);
}

TEST(GridCsv, Deterministic) {
  std::ostringstream a, b;
  write_grid_csv(a, small_atlas());
  write_grid_csv(b, small_atlas());
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(dump_report(small_atlas().report), dump_report(small_atlas().report));
}

TEST(Svg, RendersPanelsAndLoci) {
  const auto atlas = small_atlas();
  const auto& lf = atlas.fields[0];
  const auto svg = render_mode_svg(lf, singularity_loci(lf.field, Geometry::reference()), Geometry::reference());
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("y-up, 1 length unit = 40 px"), std::string::npos);
  EXPECT_NE(svg.find("id=\"workspace\""), std::string::npos);
  EXPECT_NE(svg.find("id=\"jointspace\""), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find(PlotStyle{}.colors[0]), std::string::npos);
}

TEST(Svg, EmptyWorkspaceShowsOnlyBaseFrame) {
  const Geometry far(30, 8, 5, 5, 8);
  const auto atlas = compute_atlas(far, default_grid(far, 16), AtlasOptions{Tolerances::for_geometry(far), 1, false});
  const auto& lf = atlas.fields[0];
  const auto loci = singularity_loci(lf.field, far);
  EXPECT_TRUE(loci.parallel_curves.empty());
  const auto svg = render_mode_svg(lf, loci, far);
  EXPECT_NE(svg.find(">A</text>"), std::string::npos);
  for (const auto& colour : PlotStyle{}.colors) EXPECT_EQ(svg.find(colour), std::string::npos);
}

TEST(Svg, StyleNeedsDistinctColours) {
  PlotStyle style;
  style.colors[3] = style.colors[0];
  EXPECT_THROW(style.validate(), ValidationError);
}
