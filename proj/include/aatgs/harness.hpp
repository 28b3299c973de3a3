#ifndef AATGS_HARNESS_HPP
#define AATGS_HARNESS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aatgs/core.hpp"
#include "aatgs/problems.hpp"

namespace aatgs {

struct SolverEntry {
  std::string method = "aatgs";  // "aatgs", "aa", "fixed_point"
  int window_m = 0;              // 0 = full depth
  std::optional<int> restart_d;
  double eta = kUnbounded;  // aatgs only
  std::optional<double> beta;  // defaults to the problem's beta
  double error_c = 1.0;

  /// Paper-style tag, e.g. "aatgs[3,-]" or "aa[20,50]".
  std::string label() const;
};

/// Parse "method[m,d]" (m or d may be "inf"/"-"); plain "method" gives the
/// defaults. Throws std::invalid_argument on malformed input.
SolverEntry parse_solver_tag(const std::string& tag);

struct ExperimentConfig {
  std::string problem = "bratu";
  nlohmann::json problem_params = nlohmann::json::object();
  std::vector<SolverEntry> solvers;
  double tol = 1e-8;
  int max_iters = 1000;
  unsigned seed = 42;
  std::string out_dir;       // empty disables file emission
  bool record_timing = false;  // off keeps emitted files byte-reproducible
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Problem instance plus its conventional starting point.
struct ProblemInstance {
  FixedPointProblem problem;
  Vector x0;
};

/// Build the tagged benchmark problem. All randomness derives from the
/// config seed through fixed sub-seeds.
ProblemInstance make_problem(const ExperimentConfig& config);

struct SolverSummary {
  std::string label;
  std::optional<int> iterations;  // first index at tolerance; unset = "F"
  double final_relative_residual = 0.0;
  int restarts = 0;
};

struct ExperimentResult {
  std::vector<ConvergenceTrace> traces;  // one per solver entry, in order
  std::vector<SolverSummary> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// CSV: iter,residual_norm,monitor_w,restarted,elapsed_ms with residuals at
/// 17 significant digits; monitor_w empty when absent. When timing is off the
/// elapsed column is written as 0 so re-emission is byte-identical.
void emit_trace(const ConvergenceTrace& trace, const std::string& path,
                bool record_timing = false);

std::string render_summary(const ExperimentResult& result);

enum class VerificationSuite {
  linear_equivalence,
  symmetric_band,
  spd_bound,
  gradient_checks
};

struct VerificationReport {
  bool passed = false;
  std::vector<std::string> lines;
};

VerificationReport run_verification(VerificationSuite suite, unsigned seed);
std::optional<VerificationSuite> parse_suite(const std::string& name);

/// Central-difference gradient oracle used by the gradient_checks suite;
/// independent of any analytic gradient path.
Vector central_difference_gradient(
    const std::function<double(const Vector&)>& value, const Vector& x,
    double step = 1e-6);

}  // namespace aatgs

#endif
