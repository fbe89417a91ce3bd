#pragma once

#include <functional>
#include <vector>

#include "kernelop/types.hpp"

namespace kernelop {

/// Lower Golub-Kahan bidiagonalization of an operator T between two inner-product spaces:
///   beta_1 p_1 = b,  alpha_1 q_1 = T* p_1,
///   beta_{i+1} p_{i+1} = T q_i - alpha_i p_i,  alpha_{i+1} q_{i+1} = T* p_{i+1} - beta_{i+1} q_i.
/// The p_i are 2-orthonormal; the q_i are orthonormal in the domain inner product.
/// Both sequences are fully reorthogonalized.
class LowerBidiagonalization {
 public:
  virtual ~LowerBidiagonalization() = default;

  /// Returns false when b = 0 or alpha_1 = 0.
  bool start(const Vector& b);
  /// One recursion step. Returns false on breakdown; the vanishing scalar is then stored as 0.
  bool extend();

  int steps() const noexcept { return static_cast<int>(alphas_.size()); }  // number of q vectors
  const std::vector<double>& alphas() const noexcept { return alphas_; }
  const std::vector<double>& betas() const noexcept { return betas_; }  // betas()[0] = beta_1
  /// First k columns of P / Q.
  Matrix P(int k) const { return P_.leftCols(k); }
  Matrix Q(int k) const { return Q_.leftCols(k); }
  Eigen::Ref<const Vector> q(int i) const { return Q_.col(i); }
  /// T Q_l y = P_{l+1} B_l y for l = y.size(), without touching T.
  Vector image(const Vector& y) const;
  bool broke_down() const noexcept { return broke_down_; }
  /// Running estimate of ||T||^2 (max of alpha_i^2 + beta_{i+1}^2).
  double norm_estimate_sq() const noexcept { return norm_sq_; }
  double breakdown_tol() const noexcept { return breakdown_rel_ * norm_sq_; }

  Index range_dim() const noexcept { return m_; }
  Index domain_dim() const noexcept { return n_; }

 protected:
  LowerBidiagonalization(Index m, Index n, int capacity, double breakdown_rel);

  /// T q_i for the stored column i.
  virtual Vector apply_q(int i) = 0;
  /// Orthogonalizes s (= T* p - beta q) against the stored q's, normalizes it and returns
  /// its domain norm alpha. The result becomes column steps() of Q.
  virtual double finish_q(Vector& s) = 0;
  /// T* p.
  virtual Vector apply_adjoint(const Eigen::Ref<const Vector>& p) = 0;

  void reorthogonalize_p(Vector& r) const;
  void ensure_capacity(int cols);

  Index m_;
  Index n_;
  Matrix P_;
  Matrix Q_;
  std::vector<double> alphas_;
  std::vector<double> betas_;
  double norm_sq_ = 0.0;
  double breakdown_rel_;
  bool broke_down_ = false;
  bool started_ = false;
};

/// T = Sigma on R^N with the Sigma inner product in the domain, so T* = I and
/// alpha = sqrt(s^T Sigma s). One product with Sigma per step. Besides the alpha/beta test,
/// the process stops when s^T Sigma s <= 1e-9 ||T||^2 ||s||^2, i.e. s is numerically in null(Sigma).
class SigmaGkb final : public LowerBidiagonalization {
 public:
  SigmaGkb(const Matrix& sigma, int capacity, double breakdown_rel = 1e-13);

  /// Sigma Q_k, kept so that T q_i costs nothing extra.
  Matrix SigmaQ(int k) const { return SQ_.leftCols(k); }

 protected:
  Vector apply_q(int i) override;
  double finish_q(Vector& s) override;
  Vector apply_adjoint(const Eigen::Ref<const Vector>& p) override;

 private:
  const Matrix& sigma_;
  Matrix SQ_;
};

/// Paige-Saunders bidiagonalization of a dense m x n matrix with Euclidean inner products.
class EuclideanGkb final : public LowerBidiagonalization {
 public:
  EuclideanGkb(const Matrix& a, int capacity, double breakdown_rel = 1e-13);

 protected:
  Vector apply_q(int i) override;
  double finish_q(Vector& s) override;
  Vector apply_adjoint(const Eigen::Ref<const Vector>& p) override;

 private:
  const Matrix& a_;
};

/// The (l+1) x l lower-bidiagonal matrix B_l built from the first l steps.
Matrix bidiagonal_matrix(const LowerBidiagonalization& gkb, int l);

}  // namespace kernelop
