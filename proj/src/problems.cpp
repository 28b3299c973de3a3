#include "aatgs/problems.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace aatgs {

Vector seeded_gaussian(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// --------------------------------------------------------------------- Bratu

Vector bratu_residual(const BratuSpec& spec, const Vector& v) {
  const int N = spec.grid_interior;
  if (v.size() != spec.dim()) {
    throw std::invalid_argument("bratu_residual: expected length " +
                                std::to_string(spec.dim()));
  }
  const double h = spec.h();
  const double h2l = h * h * spec.lambda;
  const double ha = h * spec.alpha;
  Vector f(v.size());
  auto at = [&](int ix, int iy) -> double {
    if (ix < 0 || ix >= N || iy < 0 || iy >= N) return 0.0;  // Dirichlet
    return v[ix + Eigen::Index(N) * iy];
  };
  for (int iy = 0; iy < N; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      const Eigen::Index k = ix + Eigen::Index(N) * iy;
      const double lap = at(ix - 1, iy) + at(ix + 1, iy) + at(ix, iy - 1) +
                         at(ix, iy + 1) - 4.0 * v[k];
      const double conv = 0.5 * (at(ix + 1, iy) - at(ix - 1, iy));
      f[k] = lap + ha * conv + h2l * std::exp(v[k]);
    }
  }
  return f;
}

FixedPointProblem bratu_problem(const BratuSpec& spec) {
  FixedPointProblem p;
  p.name = "bratu";
  p.dim = spec.dim();
  p.default_beta = 1.0;
  p.residual = [spec](const Vector& v) { return bratu_residual(spec, v); };
  return p;
}

// ---------------------------------------------------------------- H-equation

Vector hequation_residual(const HEquationSpec& spec, const Vector& h) {
  const int n = spec.n;
  if (h.size() != n) {
    throw std::invalid_argument("hequation_residual: expected length " +
                                std::to_string(n));
  }
  Vector mu(n);
  for (int i = 0; i < n; ++i) mu[i] = (i + 0.5) / n;
  const double scale = spec.omega / (2.0 * n);
  Vector f(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      sum += mu[i] * h[j] / (mu[i] + mu[j]);
    }
    const double bracket = 1.0 - scale * sum;
    if (!(bracket > 0.0)) {
      throw std::domain_error("hequation_residual: non-positive bracket at i=" +
                              std::to_string(i));
    }
    f[i] = h[i] - 1.0 / bracket;
  }
  return f;
}

FixedPointProblem hequation_problem(const HEquationSpec& spec) {
  if (spec.omega < 0.0 || spec.omega > 1.0) {
    throw std::invalid_argument("hequation_problem: omega must be in [0, 1]");
  }
  FixedPointProblem p;
  p.name = "hequation";
  p.dim = spec.n;
  p.default_beta = 1.0;
  p.residual = [spec](const Vector& h) { return hequation_residual(spec, h); };
  return p;
}

// ------------------------------------------------------------- Lennard-Jones

std::pair<double, Vector> lj_energy_and_gradient(const LennardJonesSpec& spec,
                                                 const Vector& x) {
  const int N = spec.atom_count();
  if (x.size() != spec.dim()) {
    throw std::invalid_argument("lj_energy_and_gradient: expected length " +
                                std::to_string(spec.dim()));
  }
  const double eps4 = 4.0 * spec.epsilon;
  const double d2 = spec.delta * spec.delta;
  double energy = 0.0;
  Vector grad = Vector::Zero(x.size());
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < i; ++j) {
      const Eigen::Vector3d rij = x.segment<3>(3 * i) - x.segment<3>(3 * j);
      const double r2 = rij.squaredNorm();
      if (r2 == 0.0) {
        throw std::domain_error("lj_energy_and_gradient: coincident atoms " +
                                std::to_string(i) + " and " +
                                std::to_string(j));
      }
      const double s2 = d2 / r2;
      const double s6 = s2 * s2 * s2;
      const double s12 = s6 * s6;
      energy += eps4 * (s12 - s6);
      // dE/dr * 1/r, applied along rij
      const double coeff = eps4 * (-12.0 * s12 + 6.0 * s6) / r2;
      grad.segment<3>(3 * i) += coeff * rij;
      grad.segment<3>(3 * j) -= coeff * rij;
    }
  }
  return {energy, std::move(grad)};
}

Vector fcc_initial(const LennardJonesSpec& spec) {
  // Nearest-neighbor distance a/sqrt(2) equals the pair minimum 2^(1/6) delta.
  const double a = std::pow(2.0, 1.0 / 6.0) * spec.delta * std::sqrt(2.0);
  static const double offsets[4][3] = {
      {0.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}};
  Vector x(spec.dim());
  Eigen::Index k = 0;
  const int c = spec.cells_per_side;
  for (int cx = 0; cx < c; ++cx) {
    for (int cy = 0; cy < c; ++cy) {
      for (int cz = 0; cz < c; ++cz) {
        for (const auto& off : offsets) {
          x[k++] = a * (cx + off[0]);
          x[k++] = a * (cy + off[1]);
          x[k++] = a * (cz + off[2]);
        }
      }
    }
  }
  if (spec.perturbation_scale != 0.0) {
    x += spec.perturbation_scale *
         seeded_gaussian(spec.dim(), spec.seed);
  }
  return x;
}

FixedPointProblem lj_problem(const LennardJonesSpec& spec) {
  FixedPointProblem p;
  p.name = "lennard_jones";
  p.dim = spec.dim();
  p.default_beta = 1.5e-4;
  p.residual = [spec](const Vector& x) {
    return Vector(-lj_energy_and_gradient(spec, x).second);
  };
  return p;
}

// --------------------------------------------------------- Logistic regression

std::pair<double, Vector> logreg_loss_and_gradient(const LogRegSpec& spec,
                                                   const Vector& theta) {
  if (theta.size() != spec.dim()) {
    throw std::invalid_argument("logreg_loss_and_gradient: expected length " +
                                std::to_string(spec.dim()));
  }
  const Eigen::Index N = spec.sample_count();
  const Vector margins =
      (spec.features * theta).cwiseProduct(spec.labels);  // t_i = y_i x_i' theta
  double loss = 0.0;
  Vector sig(N);  // sigma(-t_i), overflow-safe
  for (Eigen::Index i = 0; i < N; ++i) {
    const double t = margins[i];
    if (t >= 0.0) {
      const double e = std::exp(-t);
      loss += std::log1p(e);
      sig[i] = e / (1.0 + e);
    } else {
      const double e = std::exp(t);
      loss += -t + std::log1p(e);
      sig[i] = 1.0 / (1.0 + e);
    }
  }
  loss = loss / double(N) +
         0.5 * spec.lambda_reg * theta.squaredNorm();
  Vector grad = -(spec.features.transpose() *
                  sig.cwiseProduct(spec.labels)) /
                    double(N) +
                spec.lambda_reg * theta;
  return {loss, std::move(grad)};
}

FixedPointProblem logreg_problem(const LogRegSpec& spec) {
  FixedPointProblem p;
  p.name = "logreg";
  p.dim = spec.dim();
  p.default_beta = 1.0;
  auto spec_ptr = std::make_shared<LogRegSpec>(spec);
  p.residual = [spec_ptr](const Vector& theta) {
    return Vector(-logreg_loss_and_gradient(*spec_ptr, theta).second);
  };
  return p;
}

void standardize_features(Matrix& features) {
  const double N = double(features.rows());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double mean = features.col(j).mean();
    features.col(j).array() -= mean;
    const double std = std::sqrt(features.col(j).squaredNorm() / N);
    if (std >= 1e-12) features.col(j) /= std;
  }
}

LogRegSpec load_madelon(const std::string& feature_path,
                        const std::string& label_path, double lambda_reg) {
  std::ifstream ff(feature_path);
  if (!ff) throw std::runtime_error("cannot open " + feature_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  Eigen::Index ncols = -1;
  while (std::getline(ff, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!ss.eof()) {
      throw std::runtime_error(feature_path + ":" + std::to_string(lineno) +
                               ": parse error");
    }
    if (row.empty()) continue;
    if (ncols < 0) ncols = Eigen::Index(row.size());
    if (Eigen::Index(row.size()) != ncols) {
      throw std::runtime_error(feature_path + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(ncols) +
                               " values, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }

  std::ifstream lf(label_path);
  if (!lf) throw std::runtime_error("cannot open " + label_path);
  std::vector<double> labels;
  lineno = 0;
  while (std::getline(lf, line)) {
    ++lineno;
    std::istringstream ss(line);
    double y;
    if (!(ss >> y)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::runtime_error(label_path + ":" + std::to_string(lineno) +
                               ": parse error");
    }
    if (y != 1.0 && y != -1.0) {
      throw std::runtime_error(label_path + ":" + std::to_string(lineno) +
                               ": label must be +-1");
    }
    labels.push_back(y);
  }

  if (labels.size() != rows.size()) {
    throw std::runtime_error("row count mismatch: " +
                             std::to_string(rows.size()) + " feature rows vs " +
                             std::to_string(labels.size()) + " labels");
  }

  LogRegSpec spec;
  spec.lambda_reg = lambda_reg;
  spec.features.resize(Eigen::Index(rows.size()), ncols);
  for (Eigen::Index i = 0; i < spec.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ncols; ++j) {
      spec.features(i, j) = rows[i][j];
    }
  }
  spec.labels =
      Eigen::Map<Vector>(labels.data(), Eigen::Index(labels.size()));
  standardize_features(spec.features);
  return spec;
}

LogRegSpec make_synthetic_logreg(Eigen::Index samples, Eigen::Index features,
                                 unsigned seed, double lambda_reg) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  Vector mean_dir(features);
  for (Eigen::Index j = 0; j < features; ++j) mean_dir[j] = normal(rng);
  mean_dir *= 1.5 / mean_dir.norm();

  LogRegSpec spec;
  spec.lambda_reg = lambda_reg;
  spec.features.resize(samples, features);
  spec.labels.resize(samples);
  for (Eigen::Index i = 0; i < samples; ++i) {
    const double y = coin(rng) ? 1.0 : -1.0;
    spec.labels[i] = y;
    for (Eigen::Index j = 0; j < features; ++j) {
      spec.features(i, j) = y * mean_dir[j] + normal(rng);
    }
  }
  standardize_features(spec.features);
  return spec;
}

// ------------------------------------------------------------- Bilinear game

BilinearGameSpec make_bilinear_game(Eigen::Index n, double beta_game,
                                    unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  BilinearGameSpec spec;
  spec.beta_game = beta_game;
  spec.seed = seed;
  spec.A.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) spec.A(i, j) = normal(rng);
  }
  spec.b = seeded_gaussian(n, seed + 1);
  spec.c = seeded_gaussian(n, seed + 2);

  // Normalize ||A||_2 to 1 via power iteration on A^T A.
  Vector v = Vector::Ones(n).normalized();
  double sigma2 = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = spec.A.transpose() * (spec.A * v);
    const double next = w.norm();
    v = w / next;
    if (std::abs(next - sigma2) <= 1e-12 * next) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  spec.A /= std::sqrt(sigma2);

  spec.x_star = -spec.A.transpose().partialPivLu().solve(spec.c);
  spec.y_star = -spec.A.partialPivLu().solve(spec.b);
  return spec;
}

Vector bilinear_residual(const BilinearGameSpec& spec, const Vector& z) {
  const Eigen::Index n = spec.A.rows();
  if (z.size() != 2 * n) {
    throw std::invalid_argument("bilinear_residual: expected length " +
                                std::to_string(2 * n));
  }
  const auto x = z.head(n);
  const auto y = z.tail(n);
  Vector f(2 * n);
  f.head(n) = -spec.A * y - spec.b;
  const Vector Ay = spec.A * y;
  f.tail(n) = spec.A.transpose() * (x - spec.beta_game * (Ay + spec.b)) +
              spec.c;
  return f;
}

FixedPointProblem bilinear_problem(const BilinearGameSpec& spec) {
  FixedPointProblem p;
  p.name = "bilinear";
  p.dim = spec.dim();
  p.default_beta = spec.beta_game;
  auto spec_ptr = std::make_shared<BilinearGameSpec>(spec);
  p.residual = [spec_ptr](const Vector& z) {
    return bilinear_residual(*spec_ptr, z);
  };
  return p;
}

double bilinear_distance(const BilinearGameSpec& spec, const Vector& z) {
  const Eigen::Index n = spec.A.rows();
  Vector star(2 * n);
  star.head(n) = spec.x_star;
  star.tail(n) = spec.y_star;
  return (z - star).norm() / star.norm();
}

}  // namespace aatgs
