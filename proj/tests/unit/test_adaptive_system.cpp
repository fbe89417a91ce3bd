#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kernelop/adaptive_system.hpp"
#include "kernelop/grids.hpp"
#include "kernelop/operators.hpp"
#include "oracles.hpp"

using namespace kernelop;

TEST(ExplorationMeasure, HandExample) {
  Matrix g(2, 2);
  g << 1, -1, 1, 1;
  const Vector rho = build_exploration_measure(g, 0.5);
  EXPECT_DOUBLE_EQ(rho(0), 1.0);
  EXPECT_DOUBLE_EQ(rho(1), 1.0);
}

TEST(ExplorationMeasure, ZeroColumnHasZeroMass) {
  Matrix g(3, 3);
  g << 1, 0, 2, -1, 0, 1, 0.5, 0, 0;
  const Vector rho = build_exploration_measure(g, 1.0 / 3);
  EXPECT_EQ(rho(1), 0.0);
  EXPECT_NEAR(rho.sum() / 3, 1.0, 1e-15);
}

TEST(ExplorationMeasure, DegenerateDataThrows) {
  EXPECT_THROW(build_exploration_measure(Matrix::Zero(4, 3), 0.25), DegenerateDataError);
  EXPECT_THROW(assemble(Matrix::Zero(4, 3), Vector::Ones(4), 0.25), DegenerateDataError);
}

TEST(ExplorationMeasure, NonlocalSmoothInputsDecayQuadratically) {
  // Smooth inputs (no cutoff) under the nonlocal operator: g ~ u''(x) s^2 for small s.
  const Grids g = build_grids(200, 200);
  std::mt19937_64 rng(4);
  std::vector<InputSample> inputs;
  for (int k = 0; k < 10; ++k) inputs.push_back(sample_input(Example::Integral, g, SamplingOptions{}, rng));
  const Matrix m = g_matrix(OperatorSpec::for_example(Example::Nonlocal), inputs, g);
  const Vector rho = build_exploration_measure(m, g.ds);
  const double base = rho(0) / (g.s(0) * g.s(0));
  for (int l = 1; l < 4; ++l) {
    const double ratio = rho(l) / (g.s(l) * g.s(l)) / base;
    EXPECT_GT(ratio, 0.8);
    EXPECT_LT(ratio, 1.25);
  }
}

TEST(Assemble, HandExample) {
  Matrix g(2, 2);
  g << 1, -1, 1, 1;
  const AdaptiveSystem sys = assemble(g, Vector::Ones(2), 0.5);
  EXPECT_TRUE(sys.G.isApprox(Matrix::Identity(2, 2), 1e-15));
  EXPECT_TRUE(sys.Gbar.isApprox(Matrix::Identity(2, 2), 1e-15));
  EXPECT_TRUE(sys.xi.isApprox(0.5 * g, 1e-15));
  EXPECT_TRUE(sys.sigma.isApprox(0.5 * Matrix::Identity(2, 2), 1e-15));
}

TEST(Assemble, MatchesDefinitionOnRandomData) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    Matrix g = oracle::random_matrix(40, 10, rng);
    if (t % 3 == 0) g.col(4).setZero();
    const Vector f = oracle::random_vector(40, rng);
    const AdaptiveSystem sys = assemble(g, f, 0.1);
    const oracle::AdaptiveReference ref = oracle::adaptive_reference(g, 0.1);
    const double scale = ref.sigma.cwiseAbs().maxCoeff();
    EXPECT_LE((sys.sigma - ref.sigma).cwiseAbs().maxCoeff(), 1e-12 * scale);
    EXPECT_LE((sys.xi - ref.xi).cwiseAbs().maxCoeff(), 1e-12 * ref.xi.cwiseAbs().maxCoeff());
    EXPECT_LE((sys.rho - ref.rho).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(sys.rho.sum() * 0.1, 1.0, 1e-12);
    EXPECT_EQ(sys.sigma, sys.sigma.transpose());
    // Sigma = g xi^T ds
    EXPECT_LE((sys.sigma - g * sys.xi.transpose() * 0.1).cwiseAbs().maxCoeff(), 1e-12 * scale);
    if (t % 3 == 0) {
      EXPECT_TRUE(sys.Gbar.row(4).isZero(0.0));
      EXPECT_TRUE(sys.Gbar.col(4).isZero(0.0));
    }
  }
}

TEST(Assemble, PositiveSemidefiniteAndRankBounded) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    const Matrix g = oracle::random_matrix(30, 8, rng);
    const AdaptiveSystem sys = assemble(g, Vector::Zero(30), 0.125);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sys.sigma);
    const double top = es.eigenvalues().maxCoeff();
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * top);
    EXPECT_LE(oracle::numerical_rank(sys.sigma), 8);
  }
}

TEST(Assemble, DuplicatedRowsGiveSingularSigma) {
  std::mt19937_64 rng(19);
  Matrix g = oracle::random_matrix(6, 6, rng);
  g.row(5) = g.row(1);
  const AdaptiveSystem sys = assemble(g, Vector::Ones(6), 1.0 / 6);
  EXPECT_LT(oracle::numerical_rank(sys.sigma), 6);
}

TEST(Assemble, DimensionMismatchThrows) {
  EXPECT_THROW(assemble(Matrix::Ones(3, 2), Vector::Ones(4), 0.5), std::invalid_argument);
}

TEST(Assemble, QuadraticFormIdentity) {
  // c^T Sigma c = ds^2 (g^T c)^T Gbar (g^T c): nonnegative, and zero exactly when xi^T c = 0.
  std::mt19937_64 rng(23);
  Matrix g = oracle::random_matrix(12, 5, rng);
  const AdaptiveSystem sys = assemble(g, Vector::Zero(12), 0.2);
  for (int t = 0; t < 50; ++t) {
    const Vector c = oracle::random_vector(12, rng);
    EXPECT_GE(c.dot(sys.sigma * c), -1e-12 * c.squaredNorm());
    EXPECT_GT((sys.xi.transpose() * c).norm(), 0.0);
  }
  const Matrix null = oracle::null_space(sys.sigma);
  ASSERT_EQ(null.cols(), 12 - 5);
  for (Index k = 0; k < null.cols(); ++k) {
    EXPECT_LE((sys.xi.transpose() * null.col(k)).norm(), 1e-10 * sys.xi.norm());
  }
}

TEST(Assemble, RepresenterProperty) {
  // (1/N)||Sigma c - f||^2 equals (1/N)||g (xi^T c) ds - f||^2.
  std::mt19937_64 rng(29);
  const Dataset d = generate_dataset(Example::Aggregation, true_kernel(Example::Aggregation), 16, 8, 3, 0.1, 3);
  const AdaptiveSystem sys = assemble(d.g, d.f, d.grids.ds);
  for (int t = 0; t < 10; ++t) {
    const Vector c = oracle::random_vector(sys.rows(), rng);
    const double lhs = (sys.sigma * c - d.f).squaredNorm();
    const double rhs = (forward_riemann(d.g, eval_estimate(sys, c), d.grids.ds) - d.f).squaredNorm();
    EXPECT_NEAR(lhs, rhs, 1e-10 * rhs);
  }
}

TEST(Assemble, PseudoInverseReproducesNoiselessData) {
  std::mt19937_64 rng(31);
  const Matrix g = oracle::random_matrix(8, 4, rng);
  const Vector phi_star = oracle::random_vector(4, rng);
  const Vector f = forward_riemann(g, phi_star, 0.25);
  const AdaptiveSystem sys = assemble(g, f, 0.25);
  const Vector c = oracle::pinv(sys.sigma) * f;
  const Vector fitted = forward_riemann(g, eval_estimate(sys, c), 0.25);
  EXPECT_LE((fitted - f).norm(), 1e-8 * f.norm());
}

TEST(EvalEstimate, Examples) {
  Matrix g(2, 2);
  g << 1, -1, 1, 1;
  const AdaptiveSystem sys = assemble(g, Vector::Ones(2), 0.5);
  EXPECT_TRUE(eval_estimate(sys, Vector::Zero(2)).isZero(0.0));
  const Vector phi = eval_estimate(sys, Vector::Unit(2, 0));
  EXPECT_DOUBLE_EQ(phi(0), 0.5);
  EXPECT_DOUBLE_EQ(phi(1), -0.5);
  EXPECT_THROW(eval_estimate(sys, Vector::Zero(3)), std::invalid_argument);
}

TEST(Spectrum, CsvLayout) {
  std::ostringstream out;
  Vector w(2);
  w << 2.0, 0.5;
  write_spectrum_csv(out, w);
  EXPECT_EQ(out.str(), "index,eigenvalue\n1,2\n2,0.5\n");
}

TEST(Symmetrize, AveragesOffDiagonal) {
  Matrix a(2, 2);
  a << 1, 2, 4, 3;
  symmetrize(a);
  EXPECT_EQ(a(0, 1), 3.0);
  EXPECT_EQ(a(1, 0), 3.0);
  EXPECT_EQ(a(0, 0), 1.0);
}
