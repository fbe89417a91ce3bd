#pragma once

#include "kernelop/adaptive_system.hpp"
#include "kernelop/linalg.hpp"
#include "kernelop/report.hpp"

namespace kernelop {

/// Runs one method on a basis system (adaptive RKHS or Gaussian). Tikhonov-type methods
/// decompose Sigma unless `eig` is supplied. report.wall_time_seconds covers this call only.
Estimate solve(const BasisSystem& system, Method method, const SolverParams& params,
               const EigenSystem* eig = nullptr);

bool is_direct(Method method) noexcept;

}  // namespace kernelop
