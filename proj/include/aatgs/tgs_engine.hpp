#ifndef AATGS_TGS_ENGINE_HPP
#define AATGS_TGS_ENGINE_HPP

#include <deque>
#include <vector>

#include "aatgs/core.hpp"

namespace aatgs {

/// Result of orthogonalizing one (delta_f, delta_x) pair into the basis.
struct AppendResult {
  std::vector<double> s_offdiag;  // s_{ij} against retained columns, storage order
  double s_jj = 0.0;
  bool breakdown = false;  // s_jj <= eps * ||delta_f||; pair was not stored
  bool evicted = false;    // oldest column was dropped to make room
};

/// Windowed pair of bases built by truncated modified Gram-Schmidt:
/// Q holds locally orthonormal residual-difference directions, U receives
/// the identical linear combinations of the solution differences, and each
/// stored column keeps the S coefficients produced when it was appended.
/// Single-writer: mutations from one logical thread only.
class PairedBasis {
 public:
  /// capacity <= 0 means unbounded window.
  explicit PairedBasis(Eigen::Index dim, int capacity = 0)
      : dim_(dim), capacity_(capacity) {}

  Eigen::Index dim() const { return dim_; }
  int capacity() const { return capacity_; }
  int count() const { return static_cast<int>(q_cols_.size()); }
  bool empty() const { return q_cols_.empty(); }
  bool full() const { return capacity_ > 0 && count() >= capacity_; }

  const Vector& q(int i) const { return q_cols_[i]; }
  const Vector& u(int i) const { return u_cols_[i]; }
  const std::vector<double>& s_column(int i) const { return s_cols_[i]; }

  /// Modified Gram-Schmidt append of a new (delta_f, delta_x) pair, applying
  /// the same subtraction coefficients to both sequences. Evicts the oldest
  /// pair first when the window is full. On breakdown nothing is stored.
  AppendResult append_pair(const Vector& delta_f, const Vector& delta_x,
                           double breakdown_eps);

  /// theta = Q^T f over the stored columns, in storage order.
  Vector project(const Vector& f) const;

  struct CombineResult {
    Vector x_next;  // (x - U theta) + beta (f - Q theta)
    Vector x_bar;   // x - U theta
    Vector f_bar;   // f - Q theta
  };

  /// Next iterate from the paired bases; intermediates exposed for the
  /// linear-equivalence checks. theta length must equal count().
  CombineResult combine(const Vector& x, const Vector& f, const Vector& theta,
                        double beta) const;

  /// Drop the oldest (q, u) pair and its s-column. No-op when empty.
  void evict_oldest();

  /// Discard every stored column.
  void clear();

 private:
  Eigen::Index dim_;
  int capacity_;
  std::deque<Vector> q_cols_;
  std::deque<Vector> u_cols_;
  std::deque<std::vector<double>> s_cols_;
};

}  // namespace aatgs

#endif
