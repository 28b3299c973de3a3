#include "aatgs/aatgs_solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace aatgs {

double MonitorState::update(const std::vector<double>& s_offdiag, double s_jj,
                            double delta_x_inf_norm, bool evicted) {
  if (!(s_jj > 0.0)) {
    throw std::invalid_argument("MonitorState::update: s_jj must be positive");
  }
  if (evicted && !w_values.empty()) {
    w_values.pop_front();
  }
  if (s_offdiag.size() != w_values.size()) {
    throw std::logic_error("MonitorState::update: w_values out of sync");
  }
  double w = constant_c * delta_x_inf_norm / s_jj;
  for (std::size_t i = 0; i < s_offdiag.size(); ++i) {
    w += std::abs(s_offdiag[i]) / s_jj * w_values[i];
  }
  w_values.push_back(w);
  return w;
}

namespace {

double elapsed_sec(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

ConvergenceTrace aatgs_solve(const FixedPointProblem& problem,
                             const SolverConfig& config, const Vector& x0,
                             const Vector* x1, const SolveHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  ConvergenceTrace trace;

  auto log_iterate = [&](const Vector& x) {
    if (hooks.iterates) hooks.iterates->push_back(x);
  };
  auto record = [&](int iter, double rnorm, std::optional<double> w,
                    bool restarted) {
    trace.records.push_back({iter, rnorm, w, restarted, elapsed_sec(start)});
  };

  Vector x_prev = x0;
  Vector f_prev;
  try {
    f_prev = problem.eval(x_prev);
  } catch (const std::domain_error&) {
    trace.termination = "domain";
    trace.final_x = x_prev;
    return trace;
  }
  const double r0 = f_prev.norm();
  log_iterate(x_prev);
  record(0, r0, {}, false);
  if (r0 == 0.0) {
    trace.converged = true;
    trace.termination = "converged";
    trace.final_x = x_prev;
    return trace;
  }

  Vector x = x1 ? *x1 : Vector(x_prev + config.beta * f_prev);
  Vector f;
  try {
    f = problem.eval(x);
  } catch (const std::domain_error&) {
    trace.termination = "domain";
    trace.final_x = x_prev;
    return trace;
  }
  log_iterate(x);
  record(1, f.norm(), {}, false);

  PairedBasis basis(problem.dim, config.window_m);
  MonitorState monitor{{}, config.error_c};
  int since_restart = 0;

  auto finish = [&](bool converged, const char* why) {
    trace.converged = converged;
    trace.termination = why;
    trace.final_x = x;
    return trace;
  };

  if (f.norm() / r0 <= config.tol) return finish(true, "converged");

  for (int j = 1; j < config.max_iters; ++j) {
    const Vector dx = x - x_prev;
    const Vector df = f - f_prev;
    const double dx_inf = dx.lpNorm<Eigen::Infinity>();

    // Stagnation: delta_f at rounding level while the residual is not.
    // Restarting keeps the same two iterates, so there is no recovery (the
    // skew-symmetric x_2 = x_1 case).
    if (df.norm() <=
        config.breakdown_eps * std::max(f.norm(), f_prev.norm())) {
      return finish(false, "breakdown");
    }

    bool forced_restart = false;
    AppendResult ap = basis.append_pair(df, dx, config.breakdown_eps);
    if (ap.breakdown) {
      if (basis.empty()) return finish(false, "breakdown");
      basis.clear();
      monitor.clear();
      since_restart = 0;
      forced_restart = true;
      ap = basis.append_pair(df, dx, config.breakdown_eps);
      if (ap.breakdown) return finish(false, "breakdown");
    }

    const Vector theta = basis.project(f);
    PairedBasis::CombineResult step = basis.combine(x, f, theta, config.beta);
    Vector f_next;
    try {
      f_next = problem.eval(step.x_next);
    } catch (const std::domain_error&) {
      trace.termination = "domain";
      trace.final_x = x;
      return trace;
    }

    const double w = monitor.update(ap.s_offdiag, ap.s_jj, dx_inf, ap.evicted);
    ++since_restart;

    bool restarted = forced_restart;
    if (w > config.eta ||
        (config.fixed_restart_d && since_restart >= *config.fixed_restart_d)) {
      basis.clear();
      monitor.clear();
      since_restart = 0;
      restarted = true;
    }

    x_prev = std::move(x);
    f_prev = std::move(f);
    x = std::move(step.x_next);
    f = std::move(f_next);
    log_iterate(x);
    record(j + 1, f.norm(), w, restarted);

    if (f.norm() / r0 <= config.tol) return finish(true, "converged");
  }
  return finish(false, "budget");
}

}  // namespace aatgs
