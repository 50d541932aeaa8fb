#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "thinlayer/experiments.hpp"

using namespace thinlayer;
namespace fs = std::filesystem;

namespace {

nlohmann::json default_json() {
  std::ifstream in(THINLAYER_CONFIG_DIR "/default.json");
  return nlohmann::json::parse(in);
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("thinlayer_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST(Solve, DefaultScenarioBlocks) {
  const auto cfg = parse_config(default_json());
  const auto out = scratch("solve");
  const auto res = run_solve(cfg, out);
  EXPECT_EQ(res.exit_code, kExitOk);
  const auto j = nlohmann::json::parse(slurp(out / "coefficients.json"));
  // u0 and u1 per mode, full and reduced per (delta, mode)
  EXPECT_EQ(j["blocks"].size(), 2u * 2u + 2u * 5u * 2u);
  EXPECT_EQ(j["blocks"][0]["solver"], "u0");
  EXPECT_EQ(count_lines(out / "profiles.csv"), 1u + 41u * (2 * 2 + 2 * 5 * 2));
}

TEST(Solve, GoldenCoefficients) {
  const auto cfg = parse_config(default_json());
  const auto out = scratch("golden");
  run_solve(cfg, out);
  const auto got = nlohmann::json::parse(slurp(out / "coefficients.json"));
  std::ifstream in(THINLAYER_GOLDEN_DIR "/coefficients_default.json");
  ASSERT_TRUE(in.good());
  const auto want = nlohmann::json::parse(in);
  ASSERT_EQ(got["blocks"].size(), want["blocks"].size());
  for (std::size_t b = 0; b < want["blocks"].size(); ++b) {
    const auto& wb = want["blocks"][b];
    const auto& gb = got["blocks"][b];
    EXPECT_EQ(gb["solver"], wb["solver"]);
    EXPECT_EQ(gb["mode"], wb["mode"]);
    ASSERT_EQ(gb["regions"].size(), wb["regions"].size());
    for (std::size_t r = 0; r < wb["regions"].size(); ++r)
      for (const char* key : {"a", "b", "r_lo", "r_hi"}) {
        const double w = wb["regions"][r][key];
        const double g = gb["regions"][r][key];
        EXPECT_NEAR(g, w, 1e-12 * (1.0 + std::abs(w))) << b << " " << r << " " << key;
      }
  }
}

TEST(Solve, EmptyForcingGivesZeros) {
  auto j = default_json();
  j["forcing"] = nlohmann::json::array();
  const auto cfg = parse_config(j);
  const auto out = scratch("empty");
  EXPECT_EQ(run_solve(cfg, out).exit_code, kExitOk);
  const auto coeffs = nlohmann::json::parse(slurp(out / "coefficients.json"));
  for (const auto& blk : coeffs["blocks"])
    for (const auto& reg : blk["regions"]) {
      EXPECT_EQ(reg["a"].get<double>(), 0.0);
      EXPECT_EQ(reg["b"].get<double>(), 0.0);
    }
  std::ifstream csv(out / "profiles.csv");
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(std::stod(cells[4]), 0.0);
  }
}

TEST(Solve, ExplicitSplitSkipsReducedModel) {
  auto j = default_json();
  j["split"] = {{"mode", "explicit"}, {"p1", 0.5}};
  const auto cfg = parse_config(j);
  const auto res = run_solve(cfg, scratch("explicit"));
  EXPECT_NE(res.summary["reduced"].get<std::string>().find("skipped"), std::string::npos);
  j["allow_unsafe_model"] = true;
  const auto res2 = run_solve(parse_config(j), scratch("explicit_unsafe"));
  EXPECT_EQ(res2.summary["reduced"], "unsafe-general");
}

TEST(Solve, ResonantModeReported) {
  auto j = default_json();
  const MaterialParams m{1.0, 2.0, 4.0};
  const int n = 10;
  const double delta = boundary_symbol(n, 0.0, m, {1.0, 2.0}).lambda / (-m.kappa() * n * n);
  j["modes"] = {n};
  j["delta_ladder"] = {delta};
  j["forcing"] = nlohmann::json::array({nlohmann::json{{"c", 1.0}, {"m", 0}, {"n", n}}});
  const auto cfg = parse_config(j);
  try {
    run_solve(cfg, scratch("resonant"));
    FAIL();
  } catch (const ResonanceError& e) {
    EXPECT_EQ(e.mode(), n);
  }
}

TEST(Converge, DefaultScenario) {
  const auto cfg = parse_config(default_json());
  const auto out = scratch("converge");
  const auto res = run_converge(cfg, out, true);
  EXPECT_EQ(res.exit_code, kExitOk);
  const auto& st = res.summary["studies"];
  EXPECT_NEAR(st["theorem2-order0"]["slope"].get<double>(), 1.0, 0.15);
  EXPECT_NEAR(st["theorem2-order1"]["slope"].get<double>(), 2.0, 0.15);
  EXPECT_NEAR(st["theorem4"]["slope"].get<double>(), 2.0, 0.15);
  EXPECT_LT(st["theorem4"]["max_route_gap"].get<double>(), 1e-12);
  for (const char* f : {"theorem2_order0.csv", "theorem2_order1.csv", "theorem4.csv"}) {
    EXPECT_EQ(count_lines(out / f), 1u + 5u * 2u) << f;
    std::ifstream in(out / f);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "delta,mode,err_i_h1,err_layer_h1_weighted,err_e_h1,composite");
  }
}

TEST(Converge, SingleDeltaIsDegenerate) {
  auto j = default_json();
  j["delta_ladder"] = {0.1};
  const auto cfg = parse_config(j);
  try {
    run_converge(cfg, scratch("single"), false);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate ladder"), std::string::npos);
  }
}

TEST(Converge, UniformMaterials) {
  auto j = default_json();
  j["materials"] = {{"alpha_i", 3.0}, {"alpha_delta", 3.0}, {"alpha_e", 3.0}};
  j["split"] = {{"mode", "explicit"}, {"p1", 0.5}};
  const auto res = run_converge(parse_config(j), scratch("uniform"), true);
  EXPECT_EQ(res.exit_code, kExitOk);
  const auto& st = res.summary["studies"];
  for (const char* name : {"theorem2-order0", "theorem2-order1"}) {
    EXPECT_EQ(st[name]["status"], "ok") << name;
    EXPECT_TRUE(st[name]["outer_domains_exact"].get<bool>()) << name;
  }
  EXPECT_EQ(st["theorem4"]["status"], "not_applicable");
}

TEST(Converge, ZeroSourceIsExactReproduction) {
  auto j = default_json();
  j["forcing"] = nlohmann::json::array();
  const auto res = run_converge(parse_config(j), scratch("zero_source"), true);
  EXPECT_EQ(res.exit_code, kExitOk);
  for (const char* name : {"theorem2-order0", "theorem2-order1", "theorem4"}) {
    EXPECT_EQ(res.summary["studies"][name]["status"], "exact_reproduction") << name;
    EXPECT_FALSE(res.summary["studies"][name].contains("slope")) << name;
  }
}

TEST(Converge, StrictBandBreach) {
  auto j = default_json();
  j["slope_band"] = 1e-6;
  const auto cfg = parse_config(j);
  EXPECT_EQ(run_converge(cfg, scratch("strict"), true).exit_code, kExitTolerance);
  EXPECT_EQ(run_converge(cfg, scratch("lenient"), false).exit_code, kExitOk);
}

TEST(Converge, Deterministic) {
  const auto cfg = parse_config(default_json());
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  run_converge(cfg, a, false);
  run_converge(cfg, b, false);
  for (const char* f : {"theorem2_order0.csv", "theorem2_order1.csv", "theorem4.csv",
                        "theorem4_w_expansion.csv", "converge_summary.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(OracleCheck, Mode2) {
  auto j = default_json();
  j["modes"] = {2};
  const auto res = run_oracle_check(parse_config(j), scratch("oracle"), true);
  EXPECT_EQ(res.exit_code, kExitOk);
  ASSERT_EQ(res.summary["results"].size(), 3u);
  for (const auto& row : res.summary["results"]) {
    EXPECT_EQ(row["status"], "ok") << row.dump();
    EXPECT_NEAR(row["observed_order"].get<double>(), 2.0, 0.2);
  }
}

TEST(Sweep, WritesAllModes) {
  const auto cfg = parse_config(default_json());
  const auto out = scratch("sweep");
  const auto res = run_sweep(cfg, out);
  EXPECT_EQ(count_lines(out / "sweep.csv"), 1u + 5u * 65u);
  // the thickest layer turns the symbol negative somewhere below n = 64
  EXPECT_GT(res.summary["ladder"][0]["first_nonpositive_mode"].get<int>(), 49);
  EXPECT_EQ(res.summary["ladder"][1]["first_nonpositive_mode"].get<int>(), -1);
}

TEST(Sweep, RequiresMidDiffusion) {
  auto j = default_json();
  j["materials"] = {{"alpha_i", 3.0}, {"alpha_delta", 3.0}, {"alpha_e", 3.0}};
  j["split"] = {{"mode", "explicit"}, {"p1", 0.5}};
  EXPECT_THROW(run_sweep(parse_config(j), scratch("sweep_bad")), ValidationError);
}
