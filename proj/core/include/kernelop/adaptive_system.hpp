#pragma once

#include <iosfwd>

#include "kernelop/types.hpp"

namespace kernelop {

/// A linear system in a basis of representers: the estimate is phi = xi^T c and the loss in c is
/// ||sigma c - f||. Shared by the adaptive RKHS and the Gaussian-kernel baseline.
struct BasisSystem {
  NormKind norm = NormKind::HGbar;
  double ds = 0.0;
  Matrix xi;     // N x n_s basis values on the s-cells
  Matrix sigma;  // N x N, symmetric
  Vector f;      // N

  Index rows() const noexcept { return f.size(); }
};

/// Adds the exploration measure and the Gram kernels to the basis system.
struct AdaptiveSystem : BasisSystem {
  Vector rho;   // density on the s-cells, sum rho * ds = 1
  Matrix G;     // g^T g / N
  Matrix Gbar;  // G / (rho rho^T), zero where rho vanishes
};

/// Column absolute sums of g normalized to a density. Cells below 1e-12 of the largest are
/// rounding noise and get mass 0. Throws DegenerateDataError for g = 0.
Vector build_exploration_measure(const Matrix& g, double ds);

/// G = g^T g / N, Gbar, xi = g Gbar ds and Sigma = g xi^T ds (symmetrized).
AdaptiveSystem assemble(const Matrix& g, const Vector& f, double ds);

/// A <- (A + A^T)/2 in place.
void symmetrize(Matrix& a);

/// phi = xi^T c.
Vector eval_estimate(const BasisSystem& system, const Vector& coefficients);

/// CSV with header "index,eigenvalue", 1-based index.
void write_spectrum_csv(std::ostream& out, const Vector& eigenvalues);

}  // namespace kernelop
