#include "kernelop/bidiagonalization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kernelop {

namespace {
constexpr double kMinRayleigh = 1e-9;
}  // namespace

LowerBidiagonalization::LowerBidiagonalization(Index m, Index n, int capacity, double breakdown_rel)
    : m_(m), n_(n), breakdown_rel_(breakdown_rel) {
  const int cols = std::max(capacity, 1) + 1;
  P_.setZero(m_, cols);
  Q_.setZero(n_, cols);
}

void LowerBidiagonalization::ensure_capacity(int cols) {
  if (cols <= P_.cols()) return;
  const Index grow = std::max<Index>(cols, 2 * P_.cols());
  const Index old = P_.cols();
  P_.conservativeResize(Eigen::NoChange, grow);
  Q_.conservativeResize(Eigen::NoChange, grow);
  P_.rightCols(grow - old).setZero();
  Q_.rightCols(grow - old).setZero();
}

void LowerBidiagonalization::reorthogonalize_p(Vector& r) const {
  const Index k = static_cast<Index>(betas_.size());
  for (int pass = 0; pass < 2; ++pass) r.noalias() -= P_.leftCols(k) * (P_.leftCols(k).transpose() * r);
}

bool LowerBidiagonalization::start(const Vector& b) {
  if (started_) throw std::logic_error("bidiagonalization already started");
  if (b.size() != m_) throw std::invalid_argument("bidiagonalization: right-hand side has wrong length");
  started_ = true;
  const double beta = b.norm();
  betas_.push_back(beta);
  if (!(beta > 0.0)) {
    alphas_.push_back(0.0);
    broke_down_ = true;
    return false;
  }
  P_.col(0) = b / beta;
  Vector s = apply_adjoint(P_.col(0));
  const double alpha = finish_q(s);
  norm_sq_ = alpha * alpha;
  if (!(alpha > 0.0)) {
    alphas_.push_back(0.0);
    broke_down_ = true;
    return false;
  }
  Q_.col(0) = s;
  alphas_.push_back(alpha);
  return true;
}

bool LowerBidiagonalization::extend() {
  if (!started_) throw std::logic_error("bidiagonalization not started");
  if (broke_down_) return false;
  const int i = steps() - 1;
  ensure_capacity(i + 2);

  Vector r = apply_q(i) - alphas_[static_cast<std::size_t>(i)] * P_.col(i);
  reorthogonalize_p(r);
  const double beta = r.norm();
  norm_sq_ = std::max(norm_sq_, alphas_[static_cast<std::size_t>(i)] * alphas_[static_cast<std::size_t>(i)] + beta * beta);
  if (beta * beta <= breakdown_tol()) {
    betas_.push_back(0.0);
    alphas_.push_back(0.0);
    broke_down_ = true;
    return false;
  }
  P_.col(i + 1) = r / beta;
  betas_.push_back(beta);

  Vector s = apply_adjoint(P_.col(i + 1)) - beta * Q_.col(i);
  const double alpha = finish_q(s);
  norm_sq_ = std::max(norm_sq_, alpha * alpha);
  if (!(alpha * alpha > breakdown_tol())) {
    alphas_.push_back(0.0);
    broke_down_ = true;
    return false;
  }
  Q_.col(i + 1) = s;
  alphas_.push_back(alpha);
  return true;
}

SigmaGkb::SigmaGkb(const Matrix& sigma, int capacity, double breakdown_rel)
    : LowerBidiagonalization(sigma.rows(), sigma.cols(), capacity, breakdown_rel), sigma_(sigma) {
  if (sigma.rows() != sigma.cols()) throw std::invalid_argument("SigmaGkb: matrix must be square");
  SQ_.setZero(sigma.rows(), Q_.cols());
}

Vector SigmaGkb::apply_q(int i) { return SQ_.col(i); }

Vector SigmaGkb::apply_adjoint(const Eigen::Ref<const Vector>& p) { return p; }

double SigmaGkb::finish_q(Vector& s) {
  const Index k = static_cast<Index>(alphas_.size());
  if (SQ_.cols() < Q_.cols()) {
    const Index old = SQ_.cols();
    SQ_.conservativeResize(Eigen::NoChange, Q_.cols());
    SQ_.rightCols(Q_.cols() - old).setZero();
  }
  // Sigma-orthogonalize against q_1..q_k using the stored Sigma q_j
  for (int pass = 0; pass < 2; ++pass) s.noalias() -= Q_.leftCols(k) * (SQ_.leftCols(k).transpose() * s);
  Vector Ss = sigma_ * s;
  const double alpha_sq = s.dot(Ss);
  if (!(alpha_sq > 0.0)) return 0.0;
  // Sigma-orthogonality of q degrades like eps / (Rayleigh quotient of s); a direction this close
  // to null(Sigma) cannot be kept orthogonal and is treated as breakdown.
  if (alpha_sq <= kMinRayleigh * norm_sq_ * s.squaredNorm()) return 0.0;
  const double alpha = std::sqrt(alpha_sq);
  s /= alpha;
  SQ_.col(k) = Ss / alpha;
  return alpha;
}

EuclideanGkb::EuclideanGkb(const Matrix& a, int capacity, double breakdown_rel)
    : LowerBidiagonalization(a.rows(), a.cols(), capacity, breakdown_rel), a_(a) {}

Vector EuclideanGkb::apply_q(int i) { return a_ * Q_.col(i); }

Vector EuclideanGkb::apply_adjoint(const Eigen::Ref<const Vector>& p) { return a_.transpose() * p; }

double EuclideanGkb::finish_q(Vector& s) {
  const Index k = static_cast<Index>(alphas_.size());
  for (int pass = 0; pass < 2; ++pass) s.noalias() -= Q_.leftCols(k) * (Q_.leftCols(k).transpose() * s);
  const double alpha = s.norm();
  if (alpha > 0.0) s /= alpha;
  return alpha;
}

Vector LowerBidiagonalization::image(const Vector& y) const {
  const int l = static_cast<int>(y.size());
  if (l > steps() || static_cast<int>(betas_.size()) < l + 1) {
    throw std::out_of_range("image: only " + std::to_string(steps()) + " steps available");
  }
  Vector by = Vector::Zero(l + 1);
  for (int i = 0; i < l; ++i) {
    by(i) += alphas_[static_cast<std::size_t>(i)] * y(i);
    by(i + 1) += betas_[static_cast<std::size_t>(i + 1)] * y(i);
  }
  return P_.leftCols(l + 1) * by;
}

Matrix bidiagonal_matrix(const LowerBidiagonalization& gkb, int l) {
  if (l < 1 || l > gkb.steps() || static_cast<int>(gkb.betas().size()) < l + 1) {
    throw std::out_of_range("bidiagonal_matrix: only " + std::to_string(gkb.steps()) + " steps available");
  }
  Matrix B = Matrix::Zero(l + 1, l);
  for (int i = 0; i < l; ++i) {
    B(i, i) = gkb.alphas()[static_cast<std::size_t>(i)];
    B(i + 1, i) = gkb.betas()[static_cast<std::size_t>(i + 1)];
  }
  return B;
}

}  // namespace kernelop
