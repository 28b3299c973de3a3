#include "aatgs/core.hpp"

#include <stdexcept>

namespace aatgs {

Vector FixedPointProblem::eval(const Vector& x) const {
  if (x.size() != dim) {
    throw std::invalid_argument("FixedPointProblem '" + name +
                                "': point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim));
  }
  Vector f = residual(x);
  if (f.size() != dim) {
    throw std::logic_error("FixedPointProblem '" + name +
                           "': residual returned wrong dimension");
  }
  return f;
}

double relative_residual(const FixedPointProblem& problem, const Vector& x,
                         double r0_norm) {
  if (!(r0_norm > 0.0)) {
    throw std::invalid_argument("relative_residual: r0_norm must be positive");
  }
  return problem.eval(x).norm() / r0_norm;
}

}  // namespace aatgs
