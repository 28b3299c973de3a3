#ifndef AATGS_CORE_HPP
#define AATGS_CORE_HPP

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace aatgs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A root-finding problem f(x) = 0 posed as the fixed point of
/// g(x) = x + beta * f(x). Problems are immutable after construction and
/// residual evaluation must be deterministic and reentrant.
struct FixedPointProblem {
  std::string name;
  Eigen::Index dim = 0;
  std::function<Vector(const Vector&)> residual;
  double default_beta = 1.0;

  Vector eval(const Vector& x) const;
};

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Solver parameters shared by AATGS and the classical AA baseline.
/// window_m == 0 means full depth (m = infinity); eta == inf disables the
/// auto-restart monitor; fixed_restart_d unset disables periodic restarts.
struct SolverConfig {
  int window_m = 0;
  double beta = 1.0;
  double eta = kUnbounded;
  double error_c = 1.0;
  std::optional<int> fixed_restart_d;
  double tol = 1e-10;
  int max_iters = 1000;
  double breakdown_eps = 1e-14;

  bool unbounded_window() const { return window_m <= 0; }
};

struct IterationRecord {
  int iter = 0;
  double residual_norm = 0.0;
  std::optional<double> monitor_w;  // absent for baseline AA and iters 0, 1
  bool restarted = false;
  double elapsed_sec = 0.0;
};

struct ConvergenceTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  Vector final_x;
  std::string termination;  // "converged", "budget", "breakdown", "domain"
};

/// ||f(x)||_2 / r0_norm. Requires r0_norm > 0.
double relative_residual(const FixedPointProblem& problem, const Vector& x,
                         double r0_norm);

}  // namespace aatgs

#endif
