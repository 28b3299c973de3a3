// Command-line driver for benchmark experiments and the verification suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "aatgs/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"AATGS / Anderson acceleration benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment");
  std::string config_path, problem, out, params_json;
  std::vector<std::string> solver_tags;
  int m = 0, restart_d = 0, max_iters = 1000;
  double eta = 0.0, beta = 0.0, tol = 1e-8;
  long seed = 42;
  bool timing = false;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--problem", problem,
                  "bratu | hequation | lennard_jones | logreg_synthetic | "
                  "madelon | bilinear");
  run->add_option("--solver", solver_tags,
                  "solver tag like aatgs[3,-] or aa[20,50]; repeatable");
  run->add_option("--params", params_json, "problem parameters as JSON object");
  run->add_option("--m", m, "window size for all solvers (0 = full depth)");
  run->add_option("--restart-d", restart_d, "fixed restart dimension");
  run->add_option("--eta", eta, "auto-restart threshold");
  run->add_option("--beta", beta, "mixing parameter");
  run->add_option("--tol", tol, "relative residual tolerance");
  run->add_option("--max-iters", max_iters, "iteration budget");
  run->add_option("--seed", seed, "experiment seed");
  run->add_option("--out", out, "output directory for CSV traces + summary");
  run->add_flag("--timing", timing, "record wall time in emitted traces");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite_name;
  long vseed = 42;
  verify->add_option("--suite", suite_name,
                     "linear_equivalence | symmetric_band | spd_bound | "
                     "gradient_checks | all")
      ->required();
  verify->add_option("--seed", vseed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    try {
      nlohmann::json base = nlohmann::json::object();
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
          std::cerr << "config error: cannot open " << config_path << "\n";
          return 2;
        }
        in >> base;
      }
      aatgs::ExperimentConfig config = aatgs::config_from_json(base);

      // Flags win over file values.
      if (run->count("--problem")) config.problem = problem;
      if (!solver_tags.empty()) {
        config.solvers.clear();
        for (const auto& tag : solver_tags) {
          config.solvers.push_back(aatgs::parse_solver_tag(tag));
        }
      }
      if (config.solvers.empty()) config.solvers.push_back({});
      for (auto& s : config.solvers) {
        if (run->count("--m")) s.window_m = m;
        if (run->count("--restart-d")) s.restart_d = restart_d;
        if (run->count("--eta")) s.eta = eta;
        if (run->count("--beta")) s.beta = beta;
      }
      if (run->count("--tol")) config.tol = tol;
      if (run->count("--max-iters")) config.max_iters = max_iters;
      if (run->count("--seed")) config.seed = static_cast<unsigned>(seed);
      if (run->count("--out")) config.out_dir = out;
      if (run->count("--timing")) config.record_timing = timing;
      if (!params_json.empty()) {
        nlohmann::json pj = nlohmann::json::parse(params_json);
        for (auto it = pj.begin(); it != pj.end(); ++it) {
          config.problem_params[it.key()] = it.value();
        }
      }

      aatgs::ExperimentResult result = aatgs::run_experiment(config);
      std::cout << aatgs::render_summary(result);
      return 0;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  std::vector<std::string> suites;
  if (suite_name == "all") {
    suites = {"linear_equivalence", "symmetric_band", "spd_bound",
              "gradient_checks"};
  } else {
    suites = {suite_name};
  }
  bool all_passed = true;
  for (const auto& name : suites) {
    const auto suite = aatgs::parse_suite(name);
    if (!suite) {
      std::cerr << "config error: unknown suite '" << name << "'\n";
      return 2;
    }
    const aatgs::VerificationReport report =
        aatgs::run_verification(*suite, static_cast<unsigned>(vseed));
    std::cout << (report.passed ? "PASS" : "FAIL") << " " << name << "\n";
    for (const auto& line : report.lines) {
      std::cout << "  " << line << "\n";
    }
    all_passed = all_passed && report.passed;
  }
  return all_passed ? 0 : 1;
}
