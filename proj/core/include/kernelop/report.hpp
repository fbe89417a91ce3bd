#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kernelop/types.hpp"

namespace kernelop {

/// Diagnostics shared by every solver.
struct SolverReport {
  Method method = Method::TikhonovLC;
  std::optional<double> lambda;        // in the units of the loss (1/N)||.||^2 + lambda ||.||^2
  std::optional<int> stop_iteration;
  std::vector<double> residual_history;       // ||Sigma c - f||_2 (Tikhonov: along the lambda grid)
  std::vector<double> solution_norm_history;  // ||c|| in the regularization norm
  double wall_time_seconds = 0.0;
  std::vector<std::string> flags;  // e.g. "no corner", "no stop", "breakdown"

  bool has_flag(std::string_view flag) const;
  void add_flag(std::string flag);
};

/// JSON with keys method, lambda, stop_iteration, residual_history, solution_norm_history,
/// wall_time_seconds and flags. Absent optionals are written as null.
std::string to_json(const SolverReport& report, int indent = -1);
SolverReport report_from_json(const std::string& text);

struct Estimate {
  Vector coefficients;  // length N for basis-function norms, n_s for L2rho
  Vector phi_values;    // piecewise-constant kernel values on the s-cells
  NormKind norm_kind = NormKind::HGbar;
  Method solver_kind = Method::TikhonovLC;
  SolverReport report;
};

/// Knobs for every method; each method reads only the fields it needs.
struct SolverParams {
  double lambda = 0.0;        // TikhonovFixed
  double rank_tol = 1e-14;    // numerical-rank threshold on eigenvalues / squared singular values
  int lambda_grid = 200;      // L-curve and GCV grid size
  int l_max = 50;             // Krylov iteration cap
  int lc_window = 10;         // extra iterations past an L-curve corner candidate
  double dp_tau = 1.01;
  std::optional<double> noise_norm;  // ||epsilon||_2, required by IterativeDP
  double hybrid_stab_tol = 1e-6;
  int hybrid_stab_window = 5;
  std::optional<double> hybrid_fixed_lambda;  // bypasses WGCV when set
  int project_max_iter = 200;
  double project_tol = 1e-8;
  bool project_rhs = true;  // Sigma-GKB starts from the range projection of f
  /// Relative error of a candidate phi; required by IterativeOptimal.
  std::function<double(const Vector&)> error_of;
};

}  // namespace kernelop
