#include "aatgs/aa_baseline.hpp"

#include <chrono>
#include <stdexcept>

namespace aatgs {

void DifferenceWindow::push(const Vector& delta_x, const Vector& delta_f) {
  if (delta_x.size() != dim_ || delta_f.size() != dim_) {
    throw std::invalid_argument("DifferenceWindow::push: dimension mismatch");
  }
  if (capacity_ > 0 && count() >= capacity_) {
    x_diffs_.pop_front();
    f_diffs_.pop_front();
  }
  x_diffs_.push_back(delta_x);
  f_diffs_.push_back(delta_f);
}

void DifferenceWindow::clear() {
  x_diffs_.clear();
  f_diffs_.clear();
}

Vector aa_theta(const DifferenceWindow& window, const Vector& f) {
  const int k = window.count();
  Matrix F(f.size(), k);
  for (int i = 0; i < k; ++i) F.col(i) = window.f_diffs()[i];
  Eigen::ColPivHouseholderQR<Matrix> qr(F);
  qr.setThreshold(1e-12);  // drop directions below 1e-12 * largest diagonal
  return qr.solve(f);
}

Vector aa_step(const DifferenceWindow& window, const Vector& x, const Vector& f,
               double beta) {
  if (window.empty()) return x + beta * f;
  const Vector theta = aa_theta(window, f);
  Vector next = x + beta * f;
  for (int i = 0; i < window.count(); ++i) {
    next -= theta[i] * (window.x_diffs()[i] + beta * window.f_diffs()[i]);
  }
  return next;
}

namespace {

double elapsed_sec(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

ConvergenceTrace aa_solve(const FixedPointProblem& problem,
                          const SolverConfig& config, const Vector& x0,
                          const Vector* x1, const SolveHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  ConvergenceTrace trace;

  auto log_iterate = [&](const Vector& x) {
    if (hooks.iterates) hooks.iterates->push_back(x);
  };
  auto record = [&](int iter, double rnorm, bool restarted) {
    trace.records.push_back({iter, rnorm, {}, restarted, elapsed_sec(start)});
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
  record(0, r0, false);
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
  record(1, f.norm(), false);

  auto finish = [&](bool converged, const char* why) {
    trace.converged = converged;
    trace.termination = why;
    trace.final_x = x;
    return trace;
  };
  if (f.norm() / r0 <= config.tol) return finish(true, "converged");

  DifferenceWindow window(problem.dim, config.window_m);
  int since_restart = 0;

  for (int j = 1; j < config.max_iters; ++j) {
    window.push(x - x_prev, f - f_prev);
    Vector x_next = aa_step(window, x, f, config.beta);
    Vector f_next;
    try {
      f_next = problem.eval(x_next);
    } catch (const std::domain_error&) {
      trace.termination = "domain";
      trace.final_x = x;
      return trace;
    }

    ++since_restart;
    bool restarted = false;
    if (config.fixed_restart_d && since_restart >= *config.fixed_restart_d) {
      window.clear();
      since_restart = 0;
      restarted = true;
    }

    x_prev = std::move(x);
    f_prev = std::move(f);
    x = std::move(x_next);
    f = std::move(f_next);
    log_iterate(x);
    record(j + 1, f.norm(), restarted);

    if (f.norm() / r0 <= config.tol) return finish(true, "converged");
  }
  return finish(false, "budget");
}

ConvergenceTrace fixed_point_solve(const FixedPointProblem& problem,
                                   const SolverConfig& config, const Vector& x0,
                                   const SolveHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  ConvergenceTrace trace;
  Vector x = x0;
  double r0 = 0.0;
  for (int j = 0; j <= config.max_iters; ++j) {
    Vector f;
    try {
      f = problem.eval(x);
    } catch (const std::domain_error&) {
      trace.termination = "domain";
      trace.final_x = x;
      return trace;
    }
    if (hooks.iterates && j == 0) hooks.iterates->push_back(x);
    const double rnorm = f.norm();
    if (j == 0) r0 = rnorm;
    trace.records.push_back({j, rnorm, {}, false, elapsed_sec(start)});
    if (r0 == 0.0 || rnorm / r0 <= config.tol) {
      trace.converged = true;
      trace.termination = "converged";
      trace.final_x = x;
      return trace;
    }
    if (j == config.max_iters) break;
    x += config.beta * f;
    if (hooks.iterates) hooks.iterates->push_back(x);
  }
  trace.converged = false;
  trace.termination = "budget";
  trace.final_x = x;
  return trace;
}

}  // namespace aatgs
