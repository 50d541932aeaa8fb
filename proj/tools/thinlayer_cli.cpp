// Command-line front end: solve | converge | oracle-check | sweep.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "thinlayer/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::vector<int> modes;
  std::vector<double> ladder;
  bool strict = false;
};

thinlayer::ExperimentConfig load(const Options& opt) {
  std::ifstream in(opt.config);
  if (!in) throw thinlayer::ValidationError("config", "cannot open " + opt.config);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw thinlayer::ValidationError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw thinlayer::ValidationError("config", "top level must be a JSON object");
  if (!opt.modes.empty()) j["modes"] = opt.modes;
  if (!opt.ladder.empty()) j["delta_ladder"] = opt.ladder;
  return thinlayer::parse_config(j);
}

void print_warning(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

int run(const std::string& command, const Options& opt) {
  using namespace thinlayer;
  try {
    const auto cfg = load(opt);
    const std::filesystem::path out = opt.out.empty() ? cfg.output_dir : opt.out;
    RunResult res;
    if (command == "solve") {
      res = run_solve(cfg, out, print_warning);
    } else if (command == "converge") {
      res = run_converge(cfg, out, opt.strict, print_warning);
    } else if (command == "oracle-check") {
      res = run_oracle_check(cfg, out, opt.strict, print_warning);
    } else {
      res = run_sweep(cfg, out);
    }
    std::cout << res.summary.dump(2) << '\n';
    for (const auto& f : res.files) std::cerr << "wrote " << f.string() << '\n';
    if (res.exit_code == kExitTolerance) std::cerr << "error: tolerance band breached\n";
    return res.exit_code;
  } catch (const ResonanceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResonance;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thin-layer transmission problem: exact per-mode solves, reduced model and convergence studies"};
  app.require_subcommand(1);

  Options opt;
  std::string chosen;
  for (const char* name : {"solve", "converge", "oracle-check", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "JSON experiment configuration")->required();
    sub->add_option("--out", opt.out, "output directory (default: config output.dir, else ./out)");
    sub->add_option("--modes", opt.modes, "override the mode set (cosine modes)")->delimiter(',');
    sub->add_option("--delta-ladder", opt.ladder, "override the layer-thickness ladder")->delimiter(',');
    if (std::string_view(name) == "converge" || std::string_view(name) == "oracle-check")
      sub->add_flag("--strict", opt.strict, "exit 3 when a fitted order leaves its band");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : thinlayer::kExitValidation;
  }
  return run(chosen, opt);
}
