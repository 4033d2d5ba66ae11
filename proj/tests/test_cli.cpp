#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fivebar/cli/commands.hpp"

using namespace fivebar;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json parsed() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fivebar");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fivebar_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ForwardKinematics) {
  const auto r = run({"fk", "--theta1", "1.5708", "--theta2", "1.5708", "--assembly", "+"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.parsed();
  EXPECT_NEAR(j["p"][0].get<double>(), 3.8834, 1e-3);
  EXPECT_NEAR(j["p"][1].get<double>(), 11.1499, 1e-3);
  EXPECT_TRUE(j["mode"].is_string());
  EXPECT_EQ(j["class"], "Regular");
  EXPECT_EQ(j["assembly"], "+");
  EXPECT_GT(j["detA"].get<double>(), 0.0);
}

TEST(Cli, ForwardKinematicsInDegrees) {
  const auto r = run({"--degrees", "fk", "--theta1", "90", "--theta2", "90", "--assembly", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.parsed();
  EXPECT_NEAR(j["q"][0].get<double>(), 90.0, 1e-9);
  EXPECT_NEAR(j["p"][0].get<double>(), 1.2172, 1e-3);
  EXPECT_LT(j["detA"].get<double>(), 0.0);
}

TEST(Cli, SeparatedLegsIsNoAssembly) {
  const auto r = run({"fk", "--theta1", "2.3562", "--theta2", "0.7854", "--assembly", "+"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.parsed()["error"], "NoAssembly");
}

TEST(Cli, InverseKinematics) {
  auto r = run({"ik", "--x", "20", "--y", "0", "--mode", "++"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.parsed()["error"], "Unreachable");

  r = run({"ik", "--x", "4.5", "--y", "6", "--mode=--"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.parsed()["mode"], "--");
  r = run({"ik", "--x", "4.5", "--y", "6", "--mode", "mp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.parsed()["mode"], "-+");
  EXPECT_LT(r.parsed()["residual"].get<double>(), 1e-12);

  r = run({"ik", "--x", "13", "--y", "0", "--mode", "++"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.parsed()["error"], "ModeBoundary");
}

TEST(Cli, Classify) {
  auto r = run({"classify", "--x", "13", "--y", "0", "--mode", "++"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.parsed()["class"], "Serial");
  EXPECT_TRUE(r.parsed()["mode"].is_null());

  r = run({"classify", "--theta1", "1.5708", "--theta2", "1.5708"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.parsed()["class"], "Regular");

  r = run({"classify"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"fk", "--theta1", "1"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"--geometry", "9", "0", "5", "5", "8", "fk", "--theta1", "1", "--theta2", "1"}).code, 1);
  EXPECT_EQ(run({"ik", "--x", "1", "--y", "1", "--mode", "+?"}).code, 1);
}

TEST(Cli, Modes) {
  auto r = run({"modes", "--postures", "2,2,2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.parsed()["count"], 8);
  EXPECT_EQ(r.parsed()["signs"][0], "+++");
  EXPECT_EQ(run({"modes", "--postures", "2,2,2,2,2,2"}).parsed()["count"], 64);
  EXPECT_EQ(run({"modes", "--postures", "1"}).parsed()["count"], 1);
  EXPECT_EQ(run({"modes", "--legs", "2"}).parsed()["count"], 4);
  EXPECT_EQ(run({"modes", "--postures", "2,x"}).code, 1);
}

TEST(Cli, AtlasWritesArtifacts) {
  const auto dir = scratch("atlas");
  const auto r = run({"atlas", "--n", "64", "--out", dir.string(), "--no-stability-check"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"report.json", "grid.csv", "mode_pp.svg", "mode_pm.svg", "mode_mp.svg", "mode_mm.svg"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  const auto report = io::report_from_json(json::parse(slurp(dir / "report.json")));
  EXPECT_EQ(report.grid.nx, 64);
  EXPECT_EQ(report.total, r.parsed()["total"].get<int>());
}

TEST(Cli, AtlasIsByteIdenticalAcrossRunsAndWorkers) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run({"atlas", "--n", "64", "--out", a.string(), "--formats", "json,csv"}).code, 0);
  ASSERT_EQ(run({"atlas", "--n", "64", "--out", b.string(), "--formats", "json,csv", "--workers", "3"}).code, 0);
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "grid.csv"), slurp(b / "grid.csv"));
  EXPECT_FALSE(std::filesystem::exists(a / "mode_pp.svg"));
}

TEST(Cli, AtlasFromConfigWithEmptyWorkspace) {
  const auto dir = scratch("empty");
  {
    std::ofstream cfg(dir / "far.cfg");
    cfg << "l0 = 30\nl1 = 8\nl2 = 5\nl3 = 5\nl4 = 8\nn = 32\noutput_dir = " << (dir / "out").string() << "\n";
  }
  const auto r = run({"--config", (dir / "far.cfg").string(), "atlas"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.parsed()["total"], 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "mode_mm.svg"));
}

TEST(Cli, AtlasIoAndConfigErrors) {
  const auto dir = scratch("io");
  {
    std::ofstream(dir / "blocker") << "x";
  }
  EXPECT_EQ(run({"atlas", "--n", "16", "--out", (dir / "blocker" / "sub").string()}).code, 3);
  EXPECT_EQ(run({"--config", (dir / "missing.cfg").string(), "atlas"}).code, 3);
  {
    std::ofstream(dir / "bad.cfg") << "l0 = 9\nwhat = 1\n";
  }
  EXPECT_EQ(run({"--config", (dir / "bad.cfg").string(), "atlas"}).code, 1);
}
