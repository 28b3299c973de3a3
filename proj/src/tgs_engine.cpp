#include "aatgs/tgs_engine.hpp"

#include <stdexcept>

namespace aatgs {

AppendResult PairedBasis::append_pair(const Vector& delta_f,
                                      const Vector& delta_x,
                                      double breakdown_eps) {
  if (delta_f.size() != dim_ || delta_x.size() != dim_) {
    throw std::invalid_argument("PairedBasis::append_pair: dimension mismatch");
  }
  AppendResult result;
  if (full()) {
    evict_oldest();
    result.evicted = true;
  }

  const double df_norm = delta_f.norm();
  Vector q = delta_f;
  Vector u = delta_x;
  result.s_offdiag.reserve(q_cols_.size());
  for (std::size_t i = 0; i < q_cols_.size(); ++i) {
    const double s = q.dot(q_cols_[i]);
    q -= s * q_cols_[i];
    u -= s * u_cols_[i];
    result.s_offdiag.push_back(s);
  }
  result.s_jj = q.norm();

  if (result.s_jj <= breakdown_eps * df_norm) {
    result.breakdown = true;
    return result;
  }

  q /= result.s_jj;
  u /= result.s_jj;
  q_cols_.push_back(std::move(q));
  u_cols_.push_back(std::move(u));
  std::vector<double> col = result.s_offdiag;
  col.push_back(result.s_jj);
  s_cols_.push_back(std::move(col));
  return result;
}

Vector PairedBasis::project(const Vector& f) const {
  if (f.size() != dim_) {
    throw std::invalid_argument("PairedBasis::project: dimension mismatch");
  }
  Vector theta(count());
  for (int i = 0; i < count(); ++i) {
    theta[i] = q_cols_[i].dot(f);
  }
  return theta;
}

PairedBasis::CombineResult PairedBasis::combine(const Vector& x,
                                                const Vector& f,
                                                const Vector& theta,
                                                double beta) const {
  if (theta.size() != count()) {
    throw std::invalid_argument("PairedBasis::combine: theta length mismatch");
  }
  CombineResult r;
  r.x_bar = x;
  r.f_bar = f;
  for (int i = 0; i < count(); ++i) {
    r.x_bar -= theta[i] * u_cols_[i];
    r.f_bar -= theta[i] * q_cols_[i];
  }
  r.x_next = r.x_bar + beta * r.f_bar;
  return r;
}

void PairedBasis::evict_oldest() {
  if (q_cols_.empty()) return;
  q_cols_.pop_front();
  u_cols_.pop_front();
  s_cols_.pop_front();
}

void PairedBasis::clear() {
  q_cols_.clear();
  u_cols_.clear();
  s_cols_.clear();
}

}  // namespace aatgs
