// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   acceptance [output-dir]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "thinlayer/experiments.hpp"

using namespace thinlayer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<double> kLadder{0.1, 0.05, 0.025, 0.0125, 0.00625};

ExperimentConfig default_config() {
  std::ifstream in(THINLAYER_CONFIG_DIR "/default.json");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string num(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

double coefficient_gap(const TwoRegionModeSolution& a, const TwoRegionModeSolution& b) {
  double g = 0.0;
  for (const auto* pair : {&a.inner, &a.outer}) {
    const auto& other = pair == &a.inner ? b.inner : b.outer;
    g = std::max({g, std::abs(pair->piece.a - other.piece.a), std::abs(pair->piece.b - other.piece.b)});
  }
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0})
    g = std::max(g, std::abs(a.eval(r) - b.eval(r)));
  return g;
}

Outcome split_identities() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  std::uniform_real_distribution<double> t(0.02, 0.98);
  double worst_sum = 0.0, worst_trace = 0.0, worst_flux = 0.0;
  for (int k = 0; k < 100; ++k) {
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo < 1e-3) hi = lo + 0.5;
    const double mid = lo + t(rng) * (hi - lo);
    const MaterialParams m = k % 2 == 0 ? MaterialParams{lo, mid, hi} : MaterialParams{hi, mid, lo};
    const auto s = mid_diffusion_split(m);
    worst_sum = std::max(worst_sum, std::abs(s.p1 + s.p2 - 1.0));
    worst_trace = std::max(worst_trace, std::abs(trace_jump_coefficient(m, s)));
    worst_flux = std::max(worst_flux, std::abs(flux_jump_coefficient(m, s) - m.kappa()));
  }
  const bool ok = worst_sum <= 1e-13 && worst_trace <= 1e-13 && worst_flux <= 1e-13;
  return {ok, "max |p1+p2-1|=" + num(worst_sum) + " max |A|=" + num(worst_trace) +
                  " max |B-kappa|=" + num(worst_flux)};
}

Outcome full_residuals(const ExperimentConfig& cfg) {
  const auto split = cfg.split();
  double worst = 0.0;
  for (int n : {0, 2, 5}) {
    ForcingSpec f = cfg.forcing;
    if (n == 5) f.add({1.0, 0, {5}});
    for (double delta : {0.1, 0.01}) {
      const auto s = solve_full_mode({n}, delta, cfg.materials, cfg.geometry, split, f);
      for (double r : full_mode_residuals(s)) worst = std::max(worst, r);
    }
  }
  return {worst <= 1e-12, "max relative residual " + num(worst)};
}

Outcome oracle_orders(const ExperimentConfig& cfg) {
  const auto split = cfg.split();
  const auto& m = cfg.materials;
  const auto& g = cfg.geometry;
  const double h = cfg.oracle.h;
  const double delta = cfg.oracle.delta;
  const auto order = [&](const FdProblem& p, const std::vector<Region>& exact) {
    std::vector<std::pair<double, double>> pts;
    for (int level = 0; level < 4; ++level)
      pts.emplace_back(h / (1 << level), fd_max_error(fd_oracle_solve(p, h, level), exact));
    return fit_slope(pts).slope;
  };
  std::string detail;
  bool ok = true;
  const auto record = [&](const char* name, double o) {
    ok = ok && std::abs(o - 2.0) <= 0.2;
    detail += std::string(detail.empty() ? "" : " ") + name + "=" + num(o);
  };
  for (int n : {0, 2}) {
    const auto full = solve_full_mode({n}, delta, m, g, split, cfg.forcing);
    record(n == 0 ? "full(n=0)" : "full(n=2)",
           order(fd_full_problem({n}, delta, m, g, split, cfg.forcing),
                 {full.regions.begin(), full.regions.end()}));
  }
  const FourierMode mode{2};
  const auto u0 = solve_u0_mode(mode, m, g, cfg.forcing);
  record("two-region(n=2)", order(fd_two_region_problem(mode, m, g, cfg.forcing), {u0.inner, u0.outer}));
  const auto u1 = solve_u1_mode(mode, m, g, split, u0);
  const double Ju = trace_jump_coefficient(m, split) * u0.inner_normal_derivative();
  const double Jf = flux_jump_coefficient(m, split) * surface_laplacian_symbol(mode, g) * u0.inner_trace();
  record("jump(n=2)", order(fd_jump_problem(mode, m, g, Ju, Jf), {u1.inner, u1.outer}));
  return {ok, "observed orders " + detail};
}

Outcome study_slope(const ExperimentConfig& cfg, Study s) {
  const auto rep = run_study(s, kLadder, cfg.scenario(), 0.15);
  if (!rep.fit) return {false, std::string("no slope, status ") + to_string(rep.status)};
  bool ok = rep.status == StudyStatus::ok;
  std::string detail = "slope " + num(rep.fit->slope) + " (expected " + num(rep.expected) + " +/- 0.15)";
  if (s == Study::theorem4) {
    ok = ok && rep.max_route_gap <= 1e-12;
    detail += ", route gap " + num(rep.max_route_gap);
  }
  return {ok, detail};
}

Outcome degeneracy(const ExperimentConfig& cfg) {
  const MaterialParams m{3.0, 3.0, 3.0};
  const LayerSplit split{0.5, 0.5};
  double worst_u1 = 0.0, worst_gap = 0.0;
  for (const auto& mode : cfg.modes) {
    const auto u0 = solve_u0_mode(mode, m, cfg.geometry, cfg.forcing);
    const auto u1 = solve_u1_mode(mode, m, cfg.geometry, split, u0);
    worst_u1 = std::max(worst_u1, u1.max_coefficient());
    for (double delta : kLadder) {
      const auto full = solve_full_mode(mode, delta, m, cfg.geometry, split, cfg.forcing);
      for (int k = 0; k <= 200; ++k) {
        const double r = cfg.geometry.R_ext * k / 200.0;
        worst_gap = std::max({worst_gap, std::abs(full.eval(r) - u0.eval(r)),
                              std::abs(full.eval(r, 1) - u0.eval(r, 1))});
      }
    }
  }
  return {worst_u1 == 0.0 && worst_gap <= 1e-12,
          "max |u1 coefficient|=" + num(worst_u1) + " max |full - u0|=" + num(worst_gap)};
}

Outcome recurrence(const ExperimentConfig& cfg) {
  const auto split = cfg.split();
  double worst = 0.0;
  for (const auto& mode : cfg.modes) {
    const auto w0 = solve_w_recurrence(0, mode, cfg.materials, cfg.geometry, cfg.forcing, nullptr);
    const auto w1 = solve_w_recurrence(1, mode, cfg.materials, cfg.geometry, cfg.forcing, &w0);
    const auto u0 = solve_u0_mode(mode, cfg.materials, cfg.geometry, cfg.forcing);
    const auto u1 = solve_u1_mode(mode, cfg.materials, cfg.geometry, split, u0);
    worst = std::max({worst, coefficient_gap(w0, u0), coefficient_gap(w1, u1)});
  }
  const auto rep = run_study(Study::w_expansion, kLadder, cfg.scenario(), 0.15);
  const bool slope_ok = rep.fit && std::abs(rep.fit->slope - 2.0) <= 0.15;
  return {worst <= 1e-12 && slope_ok,
          "max |w_j - u_j|=" + num(worst) + ", slope " + (rep.fit ? num(rep.fit->slope) : "none")};
}

Outcome determinism(const ExperimentConfig& cfg, const fs::path& root) {
  const auto a = root / "run_a";
  const auto b = root / "run_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto ra = run_converge(cfg, a, false);
  run_converge(cfg, b, false);
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int compared = 0;
  for (const auto& f : ra.files) {
    if (f.extension() != ".csv") continue;
    ++compared;
    if (slurp(f) != slurp(b / f.filename())) return {false, f.filename().string() + " differs"};
  }
  return {compared >= 3, std::to_string(compared) + " CSV files byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "thinlayer_acceptance";
  const auto cfg = default_config();

  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "mid-diffusion split identities", 1.0, [] { return split_identities(); }},
      {2, "full-solver residuals", 1.0, [&] { return full_residuals(cfg); }},
      {3, "oracle equivalence", 30.0, [&] { return oracle_orders(cfg); }},
      {4, "order-0 expansion slope", 30.0, [&] { return study_slope(cfg, Study::theorem2_order0); }},
      {5, "order-1 expansion slope", 30.0, [&] { return study_slope(cfg, Study::theorem2_order1); }},
      {6, "reduced model slope and route agreement", 60.0, [&] { return study_slope(cfg, Study::theorem4); }},
      {7, "degeneracy collapse", 1.0, [&] { return degeneracy(cfg); }},
      {8, "recurrence consistency", 30.0, [&] { return recurrence(cfg); }},
      {9, "converge determinism", 60.0, [&] { return determinism(cfg, root); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail += " (over time limit " + num(c.limit_s) + " s)";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %d: %s | %s | %.3f s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
