#include "aatgs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aatgs/aa_baseline.hpp"
#include "aatgs/aatgs_solver.hpp"
#include "aatgs/linear_oracle.hpp"

namespace aatgs {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Fixed offsets applied to the experiment seed, so every source of
// randomness is reproducible from the one config value.
constexpr unsigned kProblemSeedOffset = 17;
constexpr unsigned kInitSeedOffset = 43;

}  // namespace

std::string SolverEntry::label() const {
  if (method == "fixed_point") return method;
  std::ostringstream os;
  os << method << '[';
  if (window_m <= 0) {
    os << "inf";
  } else {
    os << window_m;
  }
  os << ',';
  if (restart_d) {
    os << *restart_d;
  } else {
    os << '-';
  }
  os << ']';
  return os.str();
}

SolverEntry parse_solver_tag(const std::string& tag) {
  SolverEntry entry;
  const auto open = tag.find('[');
  entry.method = tag.substr(0, open);
  if (entry.method != "aatgs" && entry.method != "aa" &&
      entry.method != "fixed_point") {
    throw std::invalid_argument("unknown solver method '" + entry.method + "'");
  }
  if (open == std::string::npos) return entry;
  const auto close = tag.find(']', open);
  const auto comma = tag.find(',', open);
  if (close == std::string::npos || comma == std::string::npos ||
      comma > close) {
    throw std::invalid_argument("malformed solver tag '" + tag +
                                "', expected method[m,d]");
  }
  const std::string m_str = tag.substr(open + 1, comma - open - 1);
  const std::string d_str = tag.substr(comma + 1, close - comma - 1);
  try {
    entry.window_m = (m_str == "inf" || m_str == "-") ? 0 : std::stoi(m_str);
    if (d_str != "-" && d_str != "inf") entry.restart_d = std::stoi(d_str);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed solver tag '" + tag + "'");
  }
  return entry;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  config.problem = j.value("problem", config.problem);
  if (j.contains("problem_params")) config.problem_params = j["problem_params"];
  config.tol = j.value("tol", config.tol);
  config.max_iters = j.value("max_iters", config.max_iters);
  config.seed = j.value("seed", config.seed);
  config.out_dir = j.value("out", config.out_dir);
  config.record_timing = j.value("record_timing", config.record_timing);
  if (j.contains("solvers")) {
    for (const auto& s : j["solvers"]) {
      SolverEntry entry;
      if (s.is_string()) {
        entry = parse_solver_tag(s.get<std::string>());
      } else {
        entry.method = s.value("method", entry.method);
        entry.window_m = s.value("m", entry.window_m);
        if (s.contains("d") && !s["d"].is_null()) {
          entry.restart_d = s["d"].get<int>();
        }
        entry.eta = s.value("eta", entry.eta);
        if (s.contains("beta") && !s["beta"].is_null()) {
          entry.beta = s["beta"].get<double>();
        }
        entry.error_c = s.value("c", entry.error_c);
      }
      config.solvers.push_back(entry);
    }
  }
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["problem"] = config.problem;
  j["problem_params"] = config.problem_params;
  j["tol"] = config.tol;
  j["max_iters"] = config.max_iters;
  j["seed"] = config.seed;
  j["out"] = config.out_dir;
  j["record_timing"] = config.record_timing;
  j["solvers"] = nlohmann::json::array();
  for (const auto& s : config.solvers) {
    nlohmann::json e;
    e["method"] = s.method;
    e["m"] = s.window_m;
    if (s.restart_d) e["d"] = *s.restart_d;
    if (std::isfinite(s.eta)) e["eta"] = s.eta;
    if (s.beta) e["beta"] = *s.beta;
    e["c"] = s.error_c;
    j["solvers"].push_back(e);
  }
  return j;
}

ProblemInstance make_problem(const ExperimentConfig& config) {
  const auto& p = config.problem_params;
  if (config.problem == "bratu") {
    BratuSpec spec;
    spec.grid_interior = p.value("grid", 50);
    spec.alpha = p.value("alpha", 0.0);
    spec.lambda = p.value("lambda", 1.0);
    return {bratu_problem(spec), Vector::Zero(spec.dim())};
  }
  if (config.problem == "hequation") {
    HEquationSpec spec;
    spec.n = p.value("n", 1000);
    spec.omega = p.value("omega", 0.5);
    return {hequation_problem(spec), Vector::Ones(spec.n)};
  }
  if (config.problem == "lennard_jones") {
    LennardJonesSpec spec;
    spec.cells_per_side = p.value("cells", 3);
    spec.epsilon = p.value("epsilon", 1.0);
    spec.delta = p.value("delta", 1.0);
    spec.perturbation_scale = p.value("perturbation", 0.05);
    spec.seed = config.seed + kProblemSeedOffset;
    return {lj_problem(spec), fcc_initial(spec)};
  }
  if (config.problem == "logreg_synthetic") {
    LogRegSpec spec = make_synthetic_logreg(
        p.value("samples", Eigen::Index(2000)),
        p.value("features", Eigen::Index(500)),
        config.seed + kProblemSeedOffset, p.value("lambda", 0.01));
    const Eigen::Index n = spec.dim();
    return {logreg_problem(spec), Vector::Zero(n)};
  }
  if (config.problem == "madelon") {
    LogRegSpec spec =
        load_madelon(p.at("features_path").get<std::string>(),
                     p.at("labels_path").get<std::string>(),
                     p.value("lambda", 0.01));
    const Eigen::Index n = spec.dim();
    return {logreg_problem(spec), Vector::Zero(n)};
  }
  if (config.problem == "bilinear") {
    BilinearGameSpec spec =
        make_bilinear_game(p.value("n", Eigen::Index(100)),
                           p.value("beta_game", 1e-4),
                           config.seed + kProblemSeedOffset);
    Vector x0 = seeded_gaussian(spec.dim(), config.seed + kInitSeedOffset);
    return {bilinear_problem(spec), std::move(x0)};
  }
  throw std::invalid_argument("unknown problem '" + config.problem + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.solvers.empty()) {
    throw std::invalid_argument("run_experiment: at least one solver required");
  }
  ProblemInstance instance = make_problem(config);

  ExperimentResult result;
  for (const auto& entry : config.solvers) {
    SolverConfig sc;
    sc.window_m = entry.window_m;
    sc.beta = entry.beta.value_or(instance.problem.default_beta);
    sc.eta = entry.eta;
    sc.error_c = entry.error_c;
    sc.fixed_restart_d = entry.restart_d;
    sc.tol = config.tol;
    sc.max_iters = config.max_iters;

    ConvergenceTrace trace;
    if (entry.method == "aatgs") {
      trace = aatgs_solve(instance.problem, sc, instance.x0);
    } else if (entry.method == "aa") {
      trace = aa_solve(instance.problem, sc, instance.x0);
    } else if (entry.method == "fixed_point") {
      trace = fixed_point_solve(instance.problem, sc, instance.x0);
    } else {
      throw std::invalid_argument("unknown solver method '" + entry.method +
                                  "'");
    }

    SolverSummary summary;
    summary.label = entry.label();
    const double r0 = trace.records.empty() ? 0.0
                                            : trace.records.front().residual_norm;
    for (const auto& rec : trace.records) {
      if (rec.restarted) ++summary.restarts;
      if (!summary.iterations && r0 > 0.0 &&
          rec.residual_norm / r0 <= config.tol) {
        summary.iterations = rec.iter;
      }
    }
    if (!trace.records.empty() && r0 > 0.0) {
      summary.final_relative_residual =
          trace.records.back().residual_norm / r0;
    }
    result.summary.push_back(std::move(summary));
    result.traces.push_back(std::move(trace));
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    nlohmann::json summary_json;
    summary_json["config"] = config_to_json(config);
    summary_json["solvers"] = nlohmann::json::array();
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
      const auto& s = result.summary[i];
      const std::string csv_path =
          config.out_dir + "/trace_" + std::to_string(i) + "_" + s.label +
          ".csv";
      emit_trace(result.traces[i], csv_path, config.record_timing);
      nlohmann::json e;
      e["label"] = s.label;
      e["converged"] = result.traces[i].converged;
      e["termination"] = result.traces[i].termination;
      if (s.iterations) {
        e["iterations"] = *s.iterations;
      } else {
        e["iterations"] = "F";
      }
      e["final_relative_residual"] = s.final_relative_residual;
      e["restarts"] = s.restarts;
      e["trace_csv"] = csv_path;
      summary_json["solvers"].push_back(e);
    }
    std::ofstream out(config.out_dir + "/summary.json");
    if (!out) {
      throw std::runtime_error("cannot write to " + config.out_dir);
    }
    out << summary_json.dump(2) << '\n';
  }
  return result;
}

void emit_trace(const ConvergenceTrace& trace, const std::string& path,
                bool record_timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write to " + path);
  out << "iter,residual_norm,monitor_w,restarted,elapsed_ms\n";
  for (const auto& rec : trace.records) {
    out << rec.iter << ',' << format_double(rec.residual_norm) << ',';
    if (rec.monitor_w) out << format_double(*rec.monitor_w);
    out << ',' << (rec.restarted ? 1 : 0) << ',';
    if (record_timing) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3f", rec.elapsed_sec * 1e3);
      out << buf;
    } else {
      out << 0;
    }
    out << '\n';
  }
}

std::string render_summary(const ExperimentResult& result) {
  std::ostringstream os;
  os << "solver                iters   restarts  final_rel_residual\n";
  for (const auto& s : result.summary) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-20s  %-6s  %-8d  %.3e\n",
                  s.label.c_str(),
                  s.iterations ? std::to_string(*s.iterations).c_str() : "F",
                  s.restarts, s.final_relative_residual);
    os << buf;
  }
  return os.str();
}

Vector central_difference_gradient(
    const std::function<double(const Vector&)>& value, const Vector& x,
    double step) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = value(xp);
    xp[i] = xi - h;
    const double fm = value(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

std::optional<VerificationSuite> parse_suite(const std::string& name) {
  if (name == "linear_equivalence") return VerificationSuite::linear_equivalence;
  if (name == "symmetric_band") return VerificationSuite::symmetric_band;
  if (name == "spd_bound") return VerificationSuite::spd_bound;
  if (name == "gradient_checks") return VerificationSuite::gradient_checks;
  return std::nullopt;
}

namespace {

VerificationReport verify_linear_equivalence(unsigned seed) {
  VerificationReport report;
  const Eigen::Index n = 50;
  TestOperatorParams params;
  params.scale = 1.4;
  params.magnitude = 10.0;  // keeps beta * ||A|| near 1 at beta = 0.1
  const LinearOperator A =
      make_test_operator(TestOperatorKind::nonsymmetric_random, n, seed, params);
  const Vector b = seeded_gaussian(n, seed + 1);
  const Vector x0 = Vector::Zero(n);
  const EquivalenceReport eq = check_gmres_equivalence(A, b, x0, 20, 0.1);
  if (eq.breakdown) {
    report.lines.push_back("FAIL breakdown at step " +
                           std::to_string(eq.breakdown_step));
    return report;
  }
  double worst_x = 0.0, worst_r = 0.0;
  for (const auto& s : eq.steps) {
    worst_x = std::max(worst_x, s.xbar_discrepancy);
    worst_r = std::max(worst_r, s.richardson_discrepancy);
  }
  report.passed = worst_x <= 1e-8 && worst_r <= 1e-10;
  report.lines.push_back("gmres_xbar_max_discrepancy=" + format_double(worst_x));
  report.lines.push_back("richardson_max_discrepancy=" + format_double(worst_r));
  return report;
}

VerificationReport verify_symmetric_band(unsigned seed) {
  VerificationReport report;
  const Eigen::Index n = 100;
  const LinearOperator A =
      make_test_operator(TestOperatorKind::spd_spectrum, n, seed);
  const Vector b = seeded_gaussian(n, seed + 1);
  const Vector x0 = Vector::Zero(n);
  const double beta = 2.0 / 101.0;
  const int steps = 30;

  const LinearRunLog full = run_linear_aatgs(A, b, x0, steps, beta, 0);
  if (full.breakdown) {
    report.lines.push_back("FAIL breakdown at step " +
                           std::to_string(full.breakdown_step));
    return report;
  }
  double max_s = 0.0;
  for (const auto& col : full.s_cols) {
    for (double s : col) max_s = std::max(max_s, std::abs(s));
  }
  double band_violation = 0.0;
  for (std::size_t j = 0; j < full.s_cols.size(); ++j) {
    const auto& col = full.s_cols[j];  // entries i = 0..j (diag last)
    for (std::size_t i = 0; i + 3 < col.size(); ++i) {
      band_violation = std::max(band_violation, std::abs(col[i]));
    }
  }
  double theta_violation = 0.0;
  for (std::size_t j = 0; j < full.thetas.size(); ++j) {
    const Vector& theta = full.thetas[j];
    const double fnorm = full.residuals[j + 1].norm();
    for (Eigen::Index i = 0; i + 2 < theta.size(); ++i) {
      theta_violation =
          std::max(theta_violation, std::abs(theta[i]) / fnorm);
    }
  }

  const LinearRunLog trunc = run_linear_aatgs(A, b, x0, steps, beta, 3);
  double iterate_gap = 0.0;
  if (trunc.breakdown) {
    report.lines.push_back("FAIL truncated run breakdown");
    return report;
  }
  for (std::size_t j = 1; j < full.iterates.size(); ++j) {
    iterate_gap = std::max(iterate_gap,
                           (full.iterates[j] - trunc.iterates[j]).norm() /
                               full.iterates[j].norm());
  }

  report.passed = band_violation <= 1e-8 * max_s && theta_violation <= 1e-8 &&
                  iterate_gap <= 1e-6;
  report.lines.push_back("band_violation_rel=" +
                         format_double(band_violation / max_s));
  report.lines.push_back("theta_tail_violation_rel=" +
                         format_double(theta_violation));
  report.lines.push_back("aatgs3_vs_inf_gap=" + format_double(iterate_gap));
  return report;
}

VerificationReport verify_spd_bound(unsigned seed) {
  VerificationReport report;
  const Eigen::Index n = 100;
  TestOperatorParams params;  // spectrum [1, 100], kappa = 100 exact
  const LinearOperator A =
      make_test_operator(TestOperatorKind::spd_spectrum, n, seed, params);
  const Vector b = seeded_gaussian(n, seed + 1);
  const Vector x0 = Vector::Zero(n);
  const double beta = 2.0 / 101.0;
  const double mnorm = norm_i_minus_beta_a(A, beta);
  const double kappa = params.lambda_max / params.lambda_min;

  const LinearRunLog log = run_linear_aatgs(A, b, x0, 16, beta, 0);
  if (log.breakdown) {
    report.lines.push_back("FAIL breakdown at step " +
                           std::to_string(log.breakdown_step));
    return report;
  }
  const double r0 = log.residuals[0].norm();
  double worst_ratio = 0.0;
  for (int j = 1; j <= 15; ++j) {
    const double measured = log.residuals[j + 1].norm();
    const double bound = spd_bound(kappa, beta, mnorm, j, r0);
    worst_ratio = std::max(worst_ratio, measured / bound);
  }
  report.passed = worst_ratio <= 1.1;
  report.lines.push_back("max_residual_to_bound_ratio=" +
                         format_double(worst_ratio));
  return report;
}

VerificationReport verify_gradient_checks(unsigned seed) {
  VerificationReport report;
  double worst = 0.0;

  LennardJonesSpec lj;
  for (unsigned k = 0; k < 10; ++k) {
    lj.seed = seed + k;
    const Vector x = fcc_initial(lj);
    const auto [energy, grad] = lj_energy_and_gradient(lj, x);
    (void)energy;
    const Vector fd = central_difference_gradient(
        [&lj](const Vector& p) { return lj_energy_and_gradient(lj, p).first; },
        x);
    worst = std::max(worst, (fd - grad).norm() / grad.norm());
  }
  report.lines.push_back("lj_gradient_max_rel_error=" + format_double(worst));

  const LogRegSpec lr = make_synthetic_logreg(200, 50, seed);
  double worst_lr = 0.0;
  for (unsigned k = 0; k < 10; ++k) {
    const Vector theta = 0.1 * seeded_gaussian(lr.dim(), seed + 100 + k);
    const auto [loss, grad] = logreg_loss_and_gradient(lr, theta);
    (void)loss;
    const Vector fd = central_difference_gradient(
        [&lr](const Vector& t) { return logreg_loss_and_gradient(lr, t).first; },
        theta);
    worst_lr = std::max(worst_lr, (fd - grad).norm() / grad.norm());
  }
  report.lines.push_back("logreg_gradient_max_rel_error=" +
                         format_double(worst_lr));

  report.passed = worst <= 1e-6 && worst_lr <= 1e-6;
  return report;
}

}  // namespace

VerificationReport run_verification(VerificationSuite suite, unsigned seed) {
  switch (suite) {
    case VerificationSuite::linear_equivalence:
      return verify_linear_equivalence(seed);
    case VerificationSuite::symmetric_band:
      return verify_symmetric_band(seed);
    case VerificationSuite::spd_bound:
      return verify_spd_bound(seed);
    case VerificationSuite::gradient_checks:
      return verify_gradient_checks(seed);
  }
  throw std::logic_error("run_verification: unknown suite");
}

}  // namespace aatgs
