#ifndef AATGS_PROBLEMS_HPP
#define AATGS_PROBLEMS_HPP

#include <string>
#include <utility>

#include "aatgs/core.hpp"

namespace aatgs {

Vector seeded_gaussian(Eigen::Index n, unsigned seed);

// ---------------------------------------------------------------------------
// Modified Bratu problem: f(v) = A v + h alpha B v + h^2 lambda exp(v) on the
// unit square with zero Dirichlet boundary. A is the 5-point Laplacian stencil
// [1, 1, -4, 1, 1] (h^2 absorbed), B the centered first difference in x with
// entries +-1/2, both applied matrix-free.
// ---------------------------------------------------------------------------
struct BratuSpec {
  int grid_interior = 200;  // interior points per side
  double alpha = 0.0;       // convection strength; 0 gives a symmetric Jacobian
  double lambda = 1.0;
  double h() const { return 1.0 / (grid_interior + 1); }
  Eigen::Index dim() const {
    return Eigen::Index(grid_interior) * grid_interior;
  }
};

Vector bratu_residual(const BratuSpec& spec, const Vector& v);
FixedPointProblem bratu_problem(const BratuSpec& spec);

// ---------------------------------------------------------------------------
// Chandrasekhar H-equation, discretized:
//   [f(h)]_i = h_i - (1 - omega/(2n) sum_j mu_i h_j / (mu_i + mu_j))^{-1}
// with mu_i = (i - 0.5)/n. A non-positive bracket throws std::domain_error.
// ---------------------------------------------------------------------------
struct HEquationSpec {
  int n = 1000;
  double omega = 0.5;  // in [0, 1]
};

Vector hequation_residual(const HEquationSpec& spec, const Vector& h);
FixedPointProblem hequation_problem(const HEquationSpec& spec);

// ---------------------------------------------------------------------------
// Lennard-Jones cluster: minimize the pairwise potential energy starting from
// a perturbed FCC lattice; the residual is f = -grad E.
// ---------------------------------------------------------------------------
struct LennardJonesSpec {
  int cells_per_side = 3;  // 4 atoms per cell -> N = 4 * cells^3
  double epsilon = 1.0;
  double delta = 1.0;
  double perturbation_scale = 0.05;
  unsigned seed = 1;
  int atom_count() const {
    return 4 * cells_per_side * cells_per_side * cells_per_side;
  }
  Eigen::Index dim() const { return 3 * Eigen::Index(atom_count()); }
};

std::pair<double, Vector> lj_energy_and_gradient(const LennardJonesSpec& spec,
                                                 const Vector& x);
Vector fcc_initial(const LennardJonesSpec& spec);
FixedPointProblem lj_problem(const LennardJonesSpec& spec);

// ---------------------------------------------------------------------------
// L2-regularized logistic regression on standardized features.
// ---------------------------------------------------------------------------
struct LogRegSpec {
  Matrix features;  // N x n, each column mean 0 / std 1 after standardization
  Vector labels;    // +-1
  double lambda_reg = 0.01;
  Eigen::Index sample_count() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

std::pair<double, Vector> logreg_loss_and_gradient(const LogRegSpec& spec,
                                                   const Vector& theta);
FixedPointProblem logreg_problem(const LogRegSpec& spec);

/// Center each feature column to mean 0 and scale to std 1; constant columns
/// (std < 1e-12) are centered but left unscaled.
void standardize_features(Matrix& features);

/// UCI Madelon format: whitespace-delimited integers, one sample per line,
/// one +-1 label per line.
LogRegSpec load_madelon(const std::string& feature_path,
                        const std::string& label_path,
                        double lambda_reg = 0.01);

/// Offline stand-in with the Madelon shape: two seeded Gaussian classes.
LogRegSpec make_synthetic_logreg(Eigen::Index samples, Eigen::Index features,
                                 unsigned seed, double lambda_reg = 0.01);

// ---------------------------------------------------------------------------
// Zero-sum bilinear game min_x max_y x^T A y + b^T x + c^T y solved through
// the alternating-GDA residual
//   f([x; y]) = [0, -A; A^T, -beta A^T A][x; y] - [b; beta A^T b - c].
// ---------------------------------------------------------------------------
struct BilinearGameSpec {
  Matrix A;  // normalized to ||A||_2 = 1
  Vector b;
  Vector c;
  double beta_game = 1e-4;
  unsigned seed = 1;
  Vector x_star;  // -A^{-T} c
  Vector y_star;  // -A^{-1} b
  Eigen::Index dim() const { return 2 * A.rows(); }
};

BilinearGameSpec make_bilinear_game(Eigen::Index n, double beta_game,
                                    unsigned seed);
Vector bilinear_residual(const BilinearGameSpec& spec, const Vector& z);
FixedPointProblem bilinear_problem(const BilinearGameSpec& spec);

/// ||(x, y) - (x*, y*)|| / ||(x*, y*)||.
double bilinear_distance(const BilinearGameSpec& spec, const Vector& z);

}  // namespace aatgs

#endif
