#pragma once

#include <vector>

#include "kernelop/adaptive_system.hpp"
#include "kernelop/linalg.hpp"
#include "kernelop/report.hpp"

namespace kernelop {

/// Gaussian-kernel RKHS on the s-nodes, exposed as a basis system with xi = g K ds.
struct GaussianSystem : BasisSystem {
  double sigma0 = 0.1;
  Matrix K;
};

/// K(s, s') = exp(-|s - s'|^2 / (2 sigma0^2)).
Matrix gaussian_gram(const Vector& s, double sigma0);

GaussianSystem assemble_gaussian(const Matrix& g, const Vector& f, const Vector& s, double ds,
                                 double sigma0 = 0.1);

/// Weighted L2 problem min (1/N)||A c - f||^2 + lambda c^T B c with A = g ds, B = diag(rho),
/// solved in the variable ctilde = B^{1/2} c on the cells where rho > 0.
struct L2RhoSystem {
  double ds = 0.0;
  Matrix A;
  Vector rho;
  std::vector<Index> active;  // cells with rho > 0
  Vector B_half_inv;          // rho^{-1/2} on active cells
  Matrix A_tilde;             // N x |active|
  Vector f;

  Index rows() const noexcept { return f.size(); }
  Index cells() const noexcept { return rho.size(); }
  /// c = B^{-1/2} ctilde scattered to all cells, 0 where rho = 0.
  Vector to_phi(const Vector& ctilde) const;
};

L2RhoSystem assemble_l2rho(const Matrix& g, const Vector& f, double ds);

/// Same method set as the basis systems. Direct methods use the SVD of A_tilde (pass one to reuse).
/// Estimate::coefficients and phi_values both hold c.
Estimate solve_l2rho(const L2RhoSystem& system, Method method, const SolverParams& params,
                     const ThinSvd* svd = nullptr);

}  // namespace kernelop
