#include "kernelop/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kernelop {
namespace {

Index snap(double value, double step, Index count, const char* what) {
  const double scaled = value / step;
  const Index idx = static_cast<Index>(std::llround(scaled)) - 1;
  if (idx < 0 || idx >= count || std::abs(scaled - static_cast<double>(idx + 1)) > 1e-9) {
    throw std::out_of_range(std::string("eval_g: ") + what + " = " + std::to_string(value) + " is not a mesh node");
  }
  return idx;
}

}  // namespace

double eval_g(const OperatorSpec& op, const InputSample& u, const Grids& grids, Index j, Index l) {
  const Vector& v = u.values;
  const Index minus = grids.y_index(j, l, -1);
  const Index plus = grids.y_index(j, l, +1);
  const Index here = grids.y_index(j);
  switch (op.example) {
    case Example::Integral:
      return v(minus);
    case Example::Nonlocal:
      return v(plus) + v(minus) - 2.0 * v(here);
    case Example::Aggregation: {
      const Vector& d = u.derivative_values;
      return d(minus) * v(here) + v(minus) * d(here) - d(plus) * v(here) - v(plus) * d(here);
    }
  }
  return 0.0;
}

double eval_g(const OperatorSpec& op, const InputSample& u, const Grids& grids, double x, double s) {
  const Index j = snap(x, grids.dx, grids.J, "x");
  const Index l = snap(s, grids.ds, grids.ns, "s");
  return eval_g(op, u, grids, j, l);
}

double eval_g_analytic(const OperatorSpec& op, const InputSample& u, double x, double s) {
  switch (op.example) {
    case Example::Integral:
      return u.value_at(x - s);
    case Example::Nonlocal:
      return u.value_at(x + s) + u.value_at(x - s) - 2.0 * u.value_at(x);
    case Example::Aggregation: {
      const double ux = u.value_at(x);
      const double dx = u.derivative_at(x);
      return u.derivative_at(x - s) * ux + u.value_at(x - s) * dx - u.derivative_at(x + s) * ux -
             u.value_at(x + s) * dx;
    }
  }
  return 0.0;
}

Matrix g_matrix(const OperatorSpec& op, std::span<const InputSample> inputs, const Grids& grids) {
  const Index J = grids.J;
  Matrix g(static_cast<Index>(inputs.size()) * J, grids.ns);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const InputSample& u = inputs[k];
    if (u.values.size() != grids.y.size()) throw std::invalid_argument("g_matrix: input not sampled on this y-grid");
    if (op.requires_derivative && u.derivative_values.size() != grids.y.size()) {
      throw std::invalid_argument("g_matrix: aggregation input lacks derivative values");
    }
    for (Index j = 0; j < J; ++j) {
      for (Index l = 0; l < grids.ns; ++l) g(static_cast<Index>(k) * J + j, l) = eval_g(op, u, grids, j, l);
    }
  }
  return g;
}

Vector forward_riemann(const Matrix& g, const Vector& phi_values, double ds) {
  if (g.cols() != phi_values.size()) throw std::invalid_argument("forward_riemann: dimension mismatch");
  return (g * phi_values) * ds;
}

}  // namespace kernelop
