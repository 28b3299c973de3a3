#include "aatgs/linear_oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "aatgs/tgs_engine.hpp"

namespace aatgs {

FixedPointProblem linear_problem(const LinearOperator& A, const Vector& b,
                                 double beta, std::string name) {
  FixedPointProblem p;
  p.name = std::move(name);
  p.dim = A.dim;
  p.default_beta = beta;
  p.residual = [A, b](const Vector& x) { return Vector(b - A(x)); };
  return p;
}

Vector gmres_iterate(const LinearOperator& A, const Vector& b, const Vector& x0,
                     int j) {
  if (j < 0 || j > A.dim) {
    throw std::invalid_argument("gmres_iterate: step count out of range");
  }
  const Vector r0 = b - A(x0);
  const double r0_norm = r0.norm();
  if (j == 0 || r0_norm == 0.0) return x0;

  Matrix V(A.dim, j + 1);
  Matrix H = Matrix::Zero(j + 1, j);
  V.col(0) = r0 / r0_norm;
  int k = 0;
  bool lucky = false;
  for (; k < j; ++k) {
    Vector w = A(V.col(k));
    for (int i = 0; i <= k; ++i) {
      H(i, k) = V.col(i).dot(w);
      w -= H(i, k) * V.col(i);
    }
    H(k + 1, k) = w.norm();
    if (H(k + 1, k) <= 1e-14 * r0_norm) {
      ++k;
      lucky = true;
      break;
    }
    V.col(k + 1) = w / H(k + 1, k);
  }

  Matrix Hk = H.topLeftCorner(lucky ? k : k + 1, k);
  Vector rhs = Vector::Zero(Hk.rows());
  rhs[0] = r0_norm;
  Vector y = Hk.householderQr().solve(rhs);
  return x0 + V.leftCols(k) * y;
}

EquivalenceReport check_gmres_equivalence(const LinearOperator& A,
                                          const Vector& b, const Vector& x0,
                                          int steps, double beta) {
  EquivalenceReport report;
  const FixedPointProblem problem = linear_problem(A, b, beta);

  Vector x_prev = x0;
  Vector f_prev = problem.eval(x_prev);
  Vector x = x_prev + beta * f_prev;
  Vector f = problem.eval(x);
  PairedBasis basis(A.dim, 0);

  for (int j = 1; j <= steps; ++j) {
    AppendResult ap =
        basis.append_pair(f - f_prev, x - x_prev, 1e-14);
    if (ap.breakdown) {
      report.breakdown = true;
      report.breakdown_step = j;
      return report;
    }
    const Vector theta = basis.project(f);
    PairedBasis::CombineResult step = basis.combine(x, f, theta, beta);
    Vector f_next = problem.eval(step.x_next);

    const Vector x_gmres = gmres_iterate(A, b, x0, j);
    EquivalenceStep es;
    es.step = j;
    es.xbar_discrepancy = (step.x_bar - x_gmres).norm() / x_gmres.norm();
    const Vector richardson = step.f_bar - beta * A(step.f_bar);
    es.richardson_discrepancy =
        (f_next - richardson).norm() / step.f_bar.norm();
    report.steps.push_back(es);

    x_prev = std::move(x);
    f_prev = std::move(f);
    x = std::move(step.x_next);
    f = std::move(f_next);
  }
  return report;
}

double spd_bound(double kappa, double beta, double norm_i_minus_beta_a, int j,
                 double r0_norm) {
  if (kappa < 1.0) {
    throw std::invalid_argument("spd_bound: kappa must be >= 1");
  }
  const double sk = std::sqrt(kappa);
  const double ratio = (sk - 1.0) / (sk + 1.0);
  return 2.0 * norm_i_minus_beta_a * std::pow(ratio, j) * r0_norm;
}

double norm_i_minus_beta_a(const LinearOperator& A, double beta, double tol,
                           int max_iters) {
  if (A.spectrum_hint && A.symmetric) {
    const auto [lmin, lmax] = *A.spectrum_hint;
    return std::max(std::abs(1.0 - beta * lmin), std::abs(1.0 - beta * lmax));
  }
  // Power iteration on M^T M with M = I - beta A.
  auto m_apply = [&](const Vector& v) { return Vector(v - beta * A(v)); };
  auto mt_apply = [&](const Vector& v) {
    if (A.symmetric) return m_apply(v);
    if (!A.dense) {
      throw std::logic_error(
          "norm_i_minus_beta_a: nonsymmetric operator needs a dense matrix");
    }
    return Vector(v - beta * A.dense->transpose() * v);
  };
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Vector v(A.dim);
  for (Eigen::Index i = 0; i < A.dim; ++i) v[i] = normal(rng);
  v.normalize();
  double sigma2 = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = mt_apply(m_apply(v));
    const double next = w.norm();
    w /= next;
    if (std::abs(next - sigma2) <= tol * std::max(next, 1.0)) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
    v = std::move(w);
  }
  return std::sqrt(sigma2);
}

LinearOperator make_test_operator(TestOperatorKind kind, Eigen::Index n,
                                  unsigned seed,
                                  const TestOperatorParams& params) {
  if (n < 2) throw std::invalid_argument("make_test_operator: n must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
    }
    return g;
  };

  LinearOperator op;
  op.dim = n;
  Matrix M;
  switch (kind) {
    case TestOperatorKind::spd_spectrum: {
      if (!(params.lambda_min > 0.0) || params.lambda_max < params.lambda_min) {
        throw std::invalid_argument("make_test_operator: bad spectrum params");
      }
      Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
      Matrix Q = qr.householderQ();
      Vector lambda(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        lambda[i] = params.lambda_min +
                    (params.lambda_max - params.lambda_min) * double(i) /
                        double(n - 1);
      }
      M = Q * lambda.asDiagonal() * Q.transpose();
      M = 0.5 * (M + M.transpose());  // enforce exact symmetry in storage
      op.symmetric = true;
      op.spectrum_hint = {params.lambda_min, params.lambda_max};
      break;
    }
    case TestOperatorKind::nonsymmetric_random: {
      Matrix G = gaussian(n, n);
      M = Matrix::Identity(n, n) +
          (params.scale / G.operatorNorm()) * G;
      break;
    }
    case TestOperatorKind::skewplus_identity: {
      Matrix G = gaussian(n, n);
      Matrix S = 0.5 * (G - G.transpose());
      M = Matrix::Identity(n, n) + (params.scale / S.operatorNorm()) * S;
      break;
    }
    case TestOperatorKind::banded_laplacian: {
      M = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        M(i, i) = 2.0;
        if (i > 0) M(i, i - 1) = -1.0;
        if (i + 1 < n) M(i, i + 1) = -1.0;
      }
      op.symmetric = true;
      break;
    }
  }
  if (params.magnitude != 1.0) {
    M *= params.magnitude;
    if (op.spectrum_hint) {
      op.spectrum_hint = {params.magnitude * op.spectrum_hint->first,
                          params.magnitude * op.spectrum_hint->second};
    }
  }
  op.dense = M;
  op.apply = [M](const Vector& v) { return Vector(M * v); };
  return op;
}

LinearRunLog run_linear_aatgs(const LinearOperator& A, const Vector& b,
                              const Vector& x0, int steps, double beta,
                              int window_m) {
  LinearRunLog log;
  const FixedPointProblem problem = linear_problem(A, b, beta);
  Vector x_prev = x0;
  Vector f_prev = problem.eval(x_prev);
  Vector x = x_prev + beta * f_prev;
  Vector f = problem.eval(x);
  log.iterates = {x_prev, x};
  log.residuals = {f_prev, f};

  PairedBasis basis(A.dim, window_m);
  for (int j = 1; j <= steps; ++j) {
    AppendResult ap = basis.append_pair(f - f_prev, x - x_prev, 1e-14);
    if (ap.breakdown) {
      log.breakdown = true;
      log.breakdown_step = j;
      return log;
    }
    log.q_cols.push_back(basis.q(basis.count() - 1));
    log.u_cols.push_back(basis.u(basis.count() - 1));
    log.s_cols.push_back(basis.s_column(basis.count() - 1));

    const Vector theta = basis.project(f);
    log.thetas.push_back(theta);
    PairedBasis::CombineResult step = basis.combine(x, f, theta, beta);
    log.x_bars.push_back(step.x_bar);
    log.f_bars.push_back(step.f_bar);

    x_prev = std::move(x);
    f_prev = std::move(f);
    x = std::move(step.x_next);
    f = problem.eval(x);
    log.iterates.push_back(x);
    log.residuals.push_back(f);
  }
  return log;
}

Matrix krylov_basis(const LinearOperator& A, const Vector& r, int j) {
  Matrix K(A.dim, j);
  Vector v = r;
  int cols = 0;
  for (int k = 0; k < j; ++k) {
    Vector q = v;
    for (int i = 0; i < cols; ++i) {
      q -= K.col(i).dot(q) * K.col(i);
    }
    // one reorthogonalization pass keeps the oracle basis clean
    for (int i = 0; i < cols; ++i) {
      q -= K.col(i).dot(q) * K.col(i);
    }
    const double nq = q.norm();
    if (nq <= 1e-14 * v.norm()) break;
    K.col(cols++) = q / nq;
    v = A(K.col(cols - 1));
  }
  return K.leftCols(cols);
}

}  // namespace aatgs
