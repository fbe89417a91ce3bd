#include <gtest/gtest.h>

#include "kernelop/adaptive_system.hpp"
#include "kernelop/direct_solvers.hpp"
#include "kernelop/grids.hpp"
#include "kernelop/linalg.hpp"
#include "kernelop/solve.hpp"
#include "oracles.hpp"

using namespace kernelop;

TEST(Solve, DirectClassification) {
  EXPECT_TRUE(is_direct(Method::TikhonovLC));
  EXPECT_TRUE(is_direct(Method::TikhonovGCV));
  EXPECT_TRUE(is_direct(Method::TikhonovFixed));
  EXPECT_TRUE(is_direct(Method::MinimalNorm));
  EXPECT_FALSE(is_direct(Method::IterativeLC));
  EXPECT_FALSE(is_direct(Method::IterativeDP));
  EXPECT_FALSE(is_direct(Method::Hybrid));
  EXPECT_FALSE(is_direct(Method::IterativeOptimal));
}

TEST(Solve, SharedDecompositionGivesSameAnswer) {
  const Dataset d = generate_dataset(Example::Aggregation, true_kernel(Example::Aggregation), 16, 16, 3, 0.1, 8);
  const AdaptiveSystem sys = assemble(d.g, d.f, d.grids.ds);
  const EigenSystem eig = eigen_decompose(sys.sigma);
  SolverParams p;
  for (Method m : {Method::TikhonovLC, Method::TikhonovGCV}) {
    const Estimate a = solve(sys, m, p);
    const Estimate b = solve(sys, m, p, &eig);
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_EQ(a.solver_kind, m);
    EXPECT_GE(a.report.wall_time_seconds, 0.0);
  }
}

TEST(Solve, SingularSigmaStaysFinite) {
  std::mt19937_64 rng(4);
  Matrix g = oracle::random_matrix(10, 4, rng);
  g.row(7) = g.row(2);
  const AdaptiveSystem sys = assemble(g, oracle::random_vector(10, rng), 0.25);
  SolverParams p;
  p.l_max = 10;
  p.noise_norm = 0.01;
  for (Method m : {Method::TikhonovLC, Method::TikhonovGCV, Method::IterativeLC, Method::IterativeDP,
                   Method::Hybrid, Method::MinimalNorm}) {
    const Estimate e = solve(sys, m, p);
    EXPECT_TRUE(e.coefficients.allFinite()) << to_string(m);
    EXPECT_TRUE(e.phi_values.allFinite()) << to_string(m);
  }
}

TEST(Names, RoundTrip) {
  for (Method m : {Method::TikhonovLC, Method::TikhonovGCV, Method::IterativeLC, Method::IterativeDP,
                   Method::Hybrid, Method::MinimalNorm, Method::TikhonovFixed, Method::IterativeOptimal}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  for (NormKind n : {NormKind::HGbar, NormKind::HGauss, NormKind::L2rho}) EXPECT_EQ(parse_norm(to_string(n)), n);
  for (Example e : {Example::Integral, Example::Nonlocal, Example::Aggregation}) {
    EXPECT_EQ(parse_example(to_string(e)), e);
  }
  EXPECT_EQ(to_string(Method::TikhonovLC), "tikhonov_lc");
  EXPECT_EQ(to_string(NormKind::HGbar), "HGbar");
  EXPECT_EQ(to_string(Example::Aggregation), "aggregation");
  EXPECT_THROW(parse_method("newton"), std::invalid_argument);
  EXPECT_THROW(parse_norm("H1"), std::invalid_argument);
  EXPECT_THROW(parse_example("heat"), std::invalid_argument);
}
