#include "kernelop/solve.hpp"

#include <chrono>

#include "kernelop/direct_solvers.hpp"
#include "kernelop/krylov_solvers.hpp"

namespace kernelop {

bool is_direct(Method method) noexcept {
  switch (method) {
    case Method::TikhonovLC:
    case Method::TikhonovGCV:
    case Method::TikhonovFixed:
    case Method::MinimalNorm:
      return true;
    default:
      return false;
  }
}

Estimate solve(const BasisSystem& system, Method method, const SolverParams& params, const EigenSystem* eig) {
  const auto t0 = std::chrono::steady_clock::now();
  EigenSystem local;
  if (is_direct(method) && !eig) {
    local = eigen_decompose(system.sigma, params.rank_tol);
    eig = &local;
  }

  Estimate est;
  switch (method) {
    case Method::TikhonovLC:
      est = tikhonov_lcurve(system, *eig, params.lambda_grid);
      break;
    case Method::TikhonovGCV:
      est = tikhonov_gcv(system, *eig, params.lambda_grid);
      break;
    case Method::TikhonovFixed:
      est = tikhonov(system, *eig, params.lambda);
      break;
    case Method::MinimalNorm:
      est = minimal_norm_ls(system, *eig);
      break;
    case Method::IterativeLC:
      est = run_iterative(system, StopRule::LCurve, params);
      break;
    case Method::IterativeDP:
      est = run_iterative(system, StopRule::Discrepancy, params);
      break;
    case Method::IterativeOptimal:
      est = run_iterative_optimal(system, params);
      break;
    case Method::Hybrid:
      est = run_hybrid(system, params);
      break;
  }
  est.solver_kind = method;
  est.report.method = method;
  est.report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

}  // namespace kernelop
