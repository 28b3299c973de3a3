#ifndef AATGS_AATGS_SOLVER_HPP
#define AATGS_AATGS_SOLVER_HPP

#include <deque>
#include <vector>

#include "aatgs/core.hpp"
#include "aatgs/tgs_engine.hpp"

namespace aatgs {

/// Scalar recurrence bounding the infinity-norm growth of rounding errors in
/// the U basis. w_values stays aligned with the basis columns: when the basis
/// evicts its oldest column, the oldest w is dropped in lockstep.
struct MonitorState {
  std::deque<double> w_values;
  double constant_c = 1.0;

  /// w_j = C ||dx||_inf / s_jj + sum_i (|s_ij| / s_jj) w_i over the retained
  /// columns. Appends w_j; drops the oldest entry first when `evicted` is set.
  double update(const std::vector<double>& s_offdiag, double s_jj,
                double delta_x_inf_norm, bool evicted);

  void clear() { w_values.clear(); }
};

struct SolveHooks {
  std::vector<Vector>* iterates = nullptr;  // records x_0, x_1, ... when set
};

/// AATGS(m) with the rounding-error monitor and auto/fixed restarts.
/// When x1 is provided the Richardson initialization is skipped and the run
/// continues from the two given iterates, matching the state retained across
/// a restart.
ConvergenceTrace aatgs_solve(const FixedPointProblem& problem,
                             const SolverConfig& config, const Vector& x0,
                             const Vector* x1 = nullptr,
                             const SolveHooks& hooks = {});

}  // namespace aatgs

#endif
