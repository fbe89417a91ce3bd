#pragma once

#include <vector>

#include "kernelop/adaptive_system.hpp"
#include "kernelop/linalg.hpp"
#include "kernelop/report.hpp"

namespace kernelop {

/// A regularized least-squares problem diagonalized by an orthogonal basis. For a symmetric
/// system the gains are the retained eigenvalues; for a rectangular one the squared singular
/// values. With shift mu = N lambda the filtered solution has components coeff/(gain + mu) in
/// the eigen form and s coeff/(s^2 + mu) in the singular form, and both share the quantities below.
struct SpectralProblem {
  Vector gains;                   // descending, all > tol
  Vector coeffs;                  // u_i^T f
  double null_residual_sq = 0.0;  // ||f||^2 - sum coeffs^2
  Index n = 0;                    // N, the number of observations

  Index rank() const noexcept { return gains.size(); }
  double residual_sq(double shift) const;
  double solution_norm_sq(double shift) const;
  /// ||residual||^2 / (N - sum gain/(gain + shift))^2.
  double gcv(double shift) const;
};

SpectralProblem spectral_problem(const EigenSystem& eig, const Vector& f);
SpectralProblem spectral_problem(const ThinSvd& svd, const Vector& f, double tol);

/// Log-uniform grid of n points on [lo, hi] with exact endpoints.
std::vector<double> log_grid(double lo, double hi, int n);

struct LCurveResult {
  double lambda = 0.0;  // shift / N
  double shift = 0.0;
  std::vector<double> shifts;
  std::vector<double> log_residual;
  std::vector<double> log_norm;
  std::vector<double> curvature;  // NaN at the two endpoints
  bool corner_found = true;
};

/// Maximizes the signed curvature of (log residual, log norm) over shifts in [gain_r, gain_1].
/// Requires rank >= 2.
LCurveResult select_lambda_lcurve(const SpectralProblem& problem, int n_grid = 200);

struct GcvResult {
  double lambda = 0.0;
  double shift = 0.0;
  std::vector<double> shifts;
  std::vector<double> values;
};

/// Minimizes GCV over the same grid; ties go to the smaller shift. Requires rank >= 1.
GcvResult select_lambda_gcv(const SpectralProblem& problem, int n_grid = 200);

/// sum_{i <= r} u_i (u_i^T f)/(lambda_i + shift).
Vector tikhonov_coefficients(const EigenSystem& eig, const Vector& f, double shift);

/// (Sigma + shift I)^{-1} f over all eigenpairs.
Vector ridge_coefficients(const EigenSystem& eig, const Vector& f, double shift);

Estimate minimal_norm_ls(const BasisSystem& system, const EigenSystem& eig);
/// lambda is the loss weight; the applied shift is N lambda. Throws for lambda < 0.
Estimate tikhonov(const BasisSystem& system, const EigenSystem& eig, double lambda);
Estimate tikhonov_lcurve(const BasisSystem& system, const EigenSystem& eig, int n_grid = 200);
Estimate tikhonov_gcv(const BasisSystem& system, const EigenSystem& eig, int n_grid = 200);

}  // namespace kernelop
