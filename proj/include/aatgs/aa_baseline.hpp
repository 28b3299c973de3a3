#ifndef AATGS_AA_BASELINE_HPP
#define AATGS_AA_BASELINE_HPP

#include <deque>

#include "aatgs/core.hpp"
#include "aatgs/aatgs_solver.hpp"

namespace aatgs {

/// Ring buffers of the difference columns consumed by classical AA(m).
class DifferenceWindow {
 public:
  /// capacity <= 0 means unbounded window.
  explicit DifferenceWindow(Eigen::Index dim, int capacity = 0)
      : dim_(dim), capacity_(capacity) {}

  int count() const { return static_cast<int>(x_diffs_.size()); }
  bool empty() const { return x_diffs_.empty(); }

  void push(const Vector& delta_x, const Vector& delta_f);
  void clear();

  const std::deque<Vector>& x_diffs() const { return x_diffs_; }
  const std::deque<Vector>& f_diffs() const { return f_diffs_; }

 private:
  Eigen::Index dim_;
  int capacity_;
  std::deque<Vector> x_diffs_;
  std::deque<Vector> f_diffs_;
};

/// One classical AA update: theta = argmin ||f - F theta||_2 solved by
/// rank-truncating QR, then x + beta f - (X + beta F) theta. An empty window
/// degenerates to the plain fixed-point step.
Vector aa_step(const DifferenceWindow& window, const Vector& x, const Vector& f,
               double beta);

/// Least-squares coefficients alone, for the optimality tests.
Vector aa_theta(const DifferenceWindow& window, const Vector& f);

/// Classical AA(m) with optional fixed-period restart. eta and the monitor
/// are ignored: records carry no monitor_w.
ConvergenceTrace aa_solve(const FixedPointProblem& problem,
                          const SolverConfig& config, const Vector& x0,
                          const Vector* x1 = nullptr,
                          const SolveHooks& hooks = {});

/// Plain fixed-point iteration x <- x + beta f(x), for baselines.
ConvergenceTrace fixed_point_solve(const FixedPointProblem& problem,
                                   const SolverConfig& config, const Vector& x0,
                                   const SolveHooks& hooks = {});

}  // namespace aatgs

#endif
