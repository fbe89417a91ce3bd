#pragma once

#include <span>

#include "kernelop/grids.hpp"

namespace kernelop {

struct OperatorSpec {
  Example example = Example::Integral;
  bool requires_derivative = false;

  static OperatorSpec for_example(Example e) noexcept {
    return {e, e == Example::Aggregation};
  }
};

// The bivariate functional g[u](x, s):
//   Integral     u(x - s)
//   Nonlocal     u(x + s) + u(x - s) - 2 u(x)
//   Aggregation  d/dx[u(x - s) u(x)] - d/dx[u(x + s) u(x)]

/// g at mesh nodes (0-based x index j and s index l), using only the stored grid values.
double eval_g(const OperatorSpec& op, const InputSample& u, const Grids& grids, Index j, Index l);

/// g at x on the x-grid and s on the s-grid; throws std::out_of_range for off-mesh arguments.
double eval_g(const OperatorSpec& op, const InputSample& u, const Grids& grids, double x, double s);

/// g at arbitrary (x, s) from the analytic input series.
double eval_g_analytic(const OperatorSpec& op, const InputSample& u, double x, double s);

/// Stacks g[u_k](x_j, s_l) into an (n0 J) x ns matrix, rows ordered k-major.
Matrix g_matrix(const OperatorSpec& op, std::span<const InputSample> inputs, const Grids& grids);

/// Right-endpoint Riemann sum of the forward map: g * phi * ds.
Vector forward_riemann(const Matrix& g, const Vector& phi_values, double ds);

}  // namespace kernelop
