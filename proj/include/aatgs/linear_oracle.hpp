#ifndef AATGS_LINEAR_ORACLE_HPP
#define AATGS_LINEAR_ORACLE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aatgs/core.hpp"

namespace aatgs {

/// Matrix-vector product with symmetry metadata. Operators are immutable and
/// safe to share. `dense` is populated by the test-matrix generators so the
/// oracles can cross-check against explicit linear algebra.
struct LinearOperator {
  Eigen::Index dim = 0;
  std::function<Vector(const Vector&)> apply;
  bool symmetric = false;
  std::optional<std::pair<double, double>> spectrum_hint;  // (lambda_min, lambda_max)
  std::optional<Matrix> dense;

  Vector operator()(const Vector& v) const { return apply(v); }
};

/// f(x) = b - A x as a FixedPointProblem.
FixedPointProblem linear_problem(const LinearOperator& A, const Vector& b,
                                 double beta = 1.0, std::string name = "linear");

/// j-th full-GMRES iterate (Arnoldi + small least-squares) minimizing
/// ||b - A x||_2 over x0 + K_j(A, r0). Lucky breakdown returns the exact
/// solution.
Vector gmres_iterate(const LinearOperator& A, const Vector& b, const Vector& x0,
                     int j);

struct EquivalenceStep {
  int step = 0;
  double xbar_discrepancy = 0.0;        // ||xbar_j - x_j^GMRES|| / ||x_j^GMRES||
  double richardson_discrepancy = 0.0;  // ||f_{j+1} - (I - beta A) fbar_j|| / ||fbar_j||
};

struct EquivalenceReport {
  std::vector<EquivalenceStep> steps;
  bool breakdown = false;
  int breakdown_step = -1;
};

/// Runs AATGS(infinity) on f(x) = b - A x and compares, per step, the
/// intermediate xbar against the GMRES iterate and f_{j+1} against the
/// Richardson update of fbar.
EquivalenceReport check_gmres_equivalence(const LinearOperator& A,
                                          const Vector& b, const Vector& x0,
                                          int steps, double beta);

/// 2 ||I - beta A||_2 ((sqrt(kappa) - 1) / (sqrt(kappa) + 1))^j ||r0||_2.
double spd_bound(double kappa, double beta, double norm_i_minus_beta_a, int j,
                 double r0_norm);

/// ||I - beta A||_2: closed form max|1 - beta lambda| when the spectrum is
/// prescribed, otherwise power iteration on (I - beta A)^T (I - beta A).
double norm_i_minus_beta_a(const LinearOperator& A, double beta,
                           double tol = 1e-8, int max_iters = 10000);

enum class TestOperatorKind {
  spd_spectrum,         // Q^T diag(lambda) Q, lambda in [params.lambda_min, lambda_max]
  nonsymmetric_random,  // I + scale * G / ||G||_2, G dense Gaussian
  skewplus_identity,    // I + scale * (G - G^T) / 2 normalized
  banded_laplacian      // 1-D [-1, 2, -1] tridiagonal
};

struct TestOperatorParams {
  double lambda_min = 1.0;
  double lambda_max = 100.0;
  double scale = 0.9;
  // Overall multiplier. Keeps beta * ||A|| near 1 for small beta; a badly
  // scaled beta * A lets rounding errors in the paired bases compound.
  double magnitude = 1.0;
};

/// Deterministic structured operators for the theory checks: same seed gives
/// bitwise-identical matvecs.
LinearOperator make_test_operator(TestOperatorKind kind, Eigen::Index n,
                                  unsigned seed,
                                  const TestOperatorParams& params = {});

/// Orthonormal basis of K_j(A, r) built by explicit power iteration + MGS
/// (columns span K_1 through K_j in prefix order).
Matrix krylov_basis(const LinearOperator& A, const Vector& r, int j);

/// Full transcript of an AATGS run on f(x) = b - A x, restart-free, exposing
/// the internals the theory checks inspect. Column-indexed quantities are in
/// append order; with a bounded window only the window-local invariants hold.
struct LinearRunLog {
  std::vector<Vector> iterates;   // x_0, x_1, ..., x_{steps+1}
  std::vector<Vector> residuals;  // f(x_j) for each iterate
  std::vector<Vector> q_cols;     // every q appended (never evicted from the log)
  std::vector<Vector> u_cols;
  std::vector<std::vector<double>> s_cols;  // retained-window s_ij, diag last
  std::vector<Vector> thetas;               // theta at each step j >= 1
  std::vector<Vector> x_bars;
  std::vector<Vector> f_bars;
  bool breakdown = false;
  int breakdown_step = -1;
};

LinearRunLog run_linear_aatgs(const LinearOperator& A, const Vector& b,
                              const Vector& x0, int steps, double beta,
                              int window_m = 0);

}  // namespace aatgs

#endif
