#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "kernelop/adaptive_system.hpp"
#include "kernelop/bidiagonalization.hpp"
#include "kernelop/report.hpp"

namespace kernelop {

/// LSQR on top of a lower bidiagonalization: after l steps c_l = Q_l y_l minimizes ||T c - b||_2
/// over span(Q_l). The Givens scalars follow the classical recurrence
///   rho_i = sqrt(rhobar_i^2 + beta_{i+1}^2), c = rhobar_i/rho_i, s = beta_{i+1}/rho_i,
///   theta_{i+1} = s alpha_{i+1}, rhobar_{i+1} = -c alpha_{i+1},
///   phi_i = c phibar_i, phibar_{i+1} = s phibar_i,
///   c_l = c_{l-1} + (phi_l/rho_l) w_l, w_{l+1} = q_{l+1} - (theta_{l+1}/rho_l) w_l.
class GkbLsqr {
 public:
  /// residual_offset_sq is added to phibar^2 when reporting residuals (e.g. ||f - Pf||^2).
  /// When `data` is non-empty the residual is measured explicitly against it instead, which
  /// stays exact when b only approximates the projection of the data.
  GkbLsqr(std::unique_ptr<LowerBidiagonalization> process, const Vector& b, double residual_offset_sq = 0.0,
          Vector data = {});

  /// One GKB step plus the Givens update. Returns false when no further step is possible.
  bool step();

  int iteration() const noexcept { return l_; }
  bool terminated() const noexcept { return terminated_; }
  const Vector& c() const noexcept { return c_; }
  const Vector& w() const noexcept { return w_; }
  double rho_bar() const noexcept { return rhobar_; }
  double phi_bar() const noexcept { return phibar_; }
  /// sqrt(phibar^2 + offset), or ||T c_l - data|| when data was given.
  double residual_norm() const;
  /// ||y_l||_2, equal to the domain norm of c_l.
  double solution_norm() const;
  /// y_l from back substitution on the upper-bidiagonal R_l.
  Vector y() const;
  const LowerBidiagonalization& process() const noexcept { return *process_; }

 private:
  std::unique_ptr<LowerBidiagonalization> process_;
  int l_ = 0;
  bool terminated_ = false;
  Vector c_;
  Vector w_;
  double rhobar_ = 0.0;
  double phibar_ = 0.0;
  double offset_sq_ = 0.0;
  Vector data_;
  std::vector<double> rhos_;
  std::vector<double> thetas_;  // thetas_[i] couples y_i and y_{i+1}
  std::vector<double> phis_;
};

struct ProjectionResult {
  Vector v;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Approximates the projection of f onto range(Sigma) as the minimal-norm solution of
/// min ||Sigma v - Sigma f||_2, by Euclidean LSQR.
ProjectionResult project_f(const Matrix& sigma, const Vector& f, double tol = 1e-8, int max_iter = 200);

enum class StopRule { Discrepancy, LCurve, MaxIterations };

/// Shared Krylov driver for any bidiagonalization; `to_phi` maps coefficients to kernel values
/// (used only by the oracle-optimal rule).
struct KrylovProblem {
  std::unique_ptr<LowerBidiagonalization> process;
  Vector b;
  double residual_offset_sq = 0.0;
  /// Full data when b is a projection of it; residuals are then reported against it.
  Vector data;
  std::function<Vector(const Vector&)> to_phi;
};

struct KrylovOutcome {
  Vector coefficients;
  SolverReport report;
};

/// Runs the LSQR iteration with early stopping.
///   Discrepancy: first l with residual <= tau * noise_norm (noise_norm required);
///   LCurve: corner = max Menger curvature of (log residual, log norm), stop `window` past it;
///   MaxIterations: run to l_max (or termination).
KrylovOutcome run_lsqr(KrylovProblem problem, StopRule rule, const SolverParams& params);

/// Runs the LSQR iteration to l_max and returns the iterate with the smallest params.error_of.
KrylovOutcome run_lsqr_optimal(KrylovProblem problem, const SolverParams& params);

/// Hybrid: Tikhonov on the projected problem min ||B_l y - beta_1 e_1||^2 + shift ||y||^2 with
/// the shift chosen by weighted GCV at each step. `n` is the row count N used to convert shifts.
KrylovOutcome run_hybrid_lsqr(KrylovProblem problem, const SolverParams& params, Index n);

/// Menger curvature of three planar points, signed by the turn direction (left turn positive).
double menger_curvature(double x0, double y0, double x1, double y1, double x2, double y2);

/// Weighted GCV of the projected problem at shift lambda, measured against the full data:
///   (||B y_lambda - beta_1 e_1||^2 + offset_sq) / (dof - omega sum s_i^2/(s_i^2 + lambda))^2
/// with ghat = beta_1 U^T e_1 (length k+1), dof the number of observations and offset_sq the
/// part of the data outside the Krylov start vector (||f - Pf||^2). With omega = 1 and a Krylov
/// space spanning range(Sigma) this is the direct GCV function.
double wgcv(const Vector& singular_values, const Vector& ghat, double omega, double lambda, double dof,
            double offset_sq = 0.0);

/// Weight estimate at the shift s_min^2 (same conventions as wgcv).
double wgcv_omega_estimate(const Vector& singular_values, const Vector& ghat, double dof, double offset_sq = 0.0);

/// Sigma-norm solvers on a basis system.
Estimate run_iterative(const BasisSystem& system, StopRule rule, const SolverParams& params);
Estimate run_iterative_optimal(const BasisSystem& system, const SolverParams& params);
Estimate run_hybrid(const BasisSystem& system, const SolverParams& params);

/// Builds the Sigma-GKB problem, projecting f first when params.project_rhs is set.
KrylovProblem sigma_problem(const BasisSystem& system, const SolverParams& params);

}  // namespace kernelop
