#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kernelop/grids.hpp"
#include "kernelop/operators.hpp"
#include "oracles.hpp"

using namespace kernelop;

namespace {

// Input with arbitrary grid values and no analytic series.
InputSample tabulated(Example e, const Grids& g, double (*fn)(double)) {
  InputSample u;
  u.example = e;
  u.values.resize(g.y.size());
  for (Index i = 0; i < g.y.size(); ++i) u.values(i) = fn(g.y(i));
  return u;
}

}  // namespace

TEST(Operators, NonlocalOnQuadratic) {
  const Grids g = build_grids(10, 10);
  const InputSample u = tabulated(Example::Nonlocal, g, [](double y) { return y * y; });
  const OperatorSpec op = OperatorSpec::for_example(Example::Nonlocal);
  for (Index j = 0; j < g.J; ++j) {
    for (Index l = 0; l < g.ns; ++l) EXPECT_NEAR(eval_g(op, u, g, j, l), 2.0 * g.s(l) * g.s(l), 1e-12);
  }
  EXPECT_NEAR(eval_g(op, u, g, 0.3, 0.2), 0.08, 1e-12);
}

TEST(Operators, NonlocalAnnihilatesAffineInputs) {
  const Grids g = build_grids(12, 6);
  const InputSample u = tabulated(Example::Nonlocal, g, [](double y) { return 3.0 * y - 0.7; });
  const Matrix m = g_matrix(OperatorSpec::for_example(Example::Nonlocal), std::span(&u, 1), g);
  EXPECT_LE(m.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Operators, AggregationOnConstantIsZero) {
  const Grids g = build_grids(8, 8);
  const InputSample u = make_input(Example::Aggregation, g, Vector::Ones(1));
  const Matrix m = g_matrix(OperatorSpec::for_example(Example::Aggregation), std::span(&u, 1), g);
  EXPECT_EQ(m.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Operators, IntegralHandValue) {
  const Grids g = build_grids(4, 4);
  Vector a = Vector::Zero(3);
  a(2) = 1.0;
  const InputSample u = make_input(Example::Integral, g, a);
  EXPECT_NEAR(eval_g(OperatorSpec::for_example(Example::Integral), u, g, 0.5, 0.25), -1.0, 1e-12);
}

TEST(Operators, IntegralReadsShiftedNode) {
  const Grids g = build_grids(12, 4);
  std::mt19937_64 rng(2);
  const InputSample u = sample_input(Example::Integral, g, SamplingOptions{}, rng);
  const OperatorSpec op = OperatorSpec::for_example(Example::Integral);
  for (Index j = 0; j < g.J; ++j) {
    for (Index l = 0; l < g.ns; ++l) {
      Index hit = -1;
      for (Index i = 0; i < g.y.size(); ++i) {
        if (std::abs(g.y(i) - (g.x(j) - g.s(l))) < 1e-12) hit = i;
      }
      ASSERT_GE(hit, 0);
      EXPECT_EQ(eval_g(op, u, g, j, l), u.values(hit));
    }
  }
}

TEST(Operators, GridMatchesAnalytic) {
  const Grids g = build_grids(24, 12);
  std::mt19937_64 rng(8);
  for (Example e : {Example::Integral, Example::Nonlocal, Example::Aggregation}) {
    const OperatorSpec op = OperatorSpec::for_example(e);
    for (int t = 0; t < 5; ++t) {
      const InputSample u = sample_input(e, g, SamplingOptions{}, rng);
      for (Index j = 0; j < g.J; ++j) {
        for (Index l = 0; l < g.ns; ++l) {
          EXPECT_NEAR(eval_g(op, u, g, j, l), eval_g_analytic(op, u, g.x(j), g.s(l)), 1e-12);
        }
      }
    }
  }
}

TEST(Operators, OffMeshThrows) {
  const Grids g = build_grids(4, 4);
  const InputSample u = make_input(Example::Integral, g, Vector::Ones(1));
  const OperatorSpec op = OperatorSpec::for_example(Example::Integral);
  EXPECT_THROW(eval_g(op, u, g, 0.3, 0.25), std::out_of_range);
  EXPECT_THROW(eval_g(op, u, g, 0.5, 0.1), std::out_of_range);
  EXPECT_THROW(eval_g(op, u, g, 1.25, 0.25), std::out_of_range);
}

TEST(Operators, GMatrixRejectsForeignInput) {
  const Grids g = build_grids(4, 4);
  const Grids other = build_grids(8, 8);
  const InputSample u = make_input(Example::Integral, other, Vector::Ones(1));
  EXPECT_THROW(g_matrix(OperatorSpec::for_example(Example::Integral), std::span(&u, 1), g),
               std::invalid_argument);
}

TEST(ForwardMap, Examples) {
  Matrix g(2, 2);
  g << 1.0, 0.0, 1.0, 1.0;
  EXPECT_TRUE(forward_riemann(g, Vector::Zero(2), 0.5).isZero(0.0));
  Vector phi(2);
  phi << 2.0, 4.0;
  EXPECT_DOUBLE_EQ(forward_riemann(g, phi, 0.5)(1), 3.0);
  EXPECT_THROW(forward_riemann(g, Vector::Zero(3), 0.5), std::invalid_argument);
}

TEST(ForwardMap, ConstantIntegralIsExact) {
  const Grids g = build_grids(10, 10);
  const InputSample u = make_input(Example::Integral, g, Vector::Ones(1));
  const Matrix m = g_matrix(OperatorSpec::for_example(Example::Integral), std::span(&u, 1), g);
  const Vector out = forward_riemann(m, Vector::Ones(10), g.ds);
  const Kernel one{"1", [](double) { return 1.0; }, {}};
  for (Index j = 0; j < g.J; ++j) {
    EXPECT_NEAR(out(j), 1.0, 1e-14);
    EXPECT_NEAR(quadrature_output(Example::Integral, u, one, g.x(j), g, 5), 1.0, 1e-14);
  }
}

TEST(ForwardMap, Linearity) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const Matrix g = oracle::random_matrix(15, 6, rng);
    const Vector p1 = oracle::random_vector(6, rng);
    const Vector p2 = oracle::random_vector(6, rng);
    const double a = 1.7, b = -0.4;
    const Vector lhs = forward_riemann(g, a * p1 + b * p2, 0.25);
    const Vector rhs = a * forward_riemann(g, p1, 0.25) + b * forward_riemann(g, p2, 0.25);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * (1.0 + rhs.norm()));
  }
}
