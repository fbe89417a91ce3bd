#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kernelop/baselines.hpp"
#include "kernelop/grids.hpp"
#include "kernelop/linalg.hpp"
#include "kernelop/solve.hpp"
#include "oracles.hpp"

using namespace kernelop;

TEST(GaussianGram, DiagonalAndLimit) {
  Vector s(2);
  s << 0.5, 1.0;
  const Matrix K = gaussian_gram(s, 0.1);
  EXPECT_EQ(K(0, 0), 1.0);
  EXPECT_EQ(K(1, 1), 1.0);
  EXPECT_NEAR(K(0, 1), std::exp(-0.25 / 0.02), 1e-15);
  EXPECT_EQ(K(0, 1), K(1, 0));

  const Matrix wide = gaussian_gram(s, 1e8);
  EXPECT_LE((wide - Matrix::Ones(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  Matrix g(3, 2);
  g << 1, 2, -1, 0.5, 0.3, 0.3;
  const GaussianSystem sys = assemble_gaussian(g, Vector::Ones(3), s, 0.5, 1e8);
  const EigenSystem eig = eigen_decompose(sys.sigma);
  EXPECT_LE(std::abs(eig.eigenvalues(1)), 1e-10 * eig.eigenvalues(0));
  EXPECT_THROW(gaussian_gram(s, 0.0), std::invalid_argument);
}

TEST(GaussianSystem, TwoWaysAgree) {
  std::mt19937_64 rng(3);
  const Grids grids = build_grids(8, 8);
  const Matrix g = oracle::random_matrix(16, 8, rng);
  const GaussianSystem sys = assemble_gaussian(g, Vector::Zero(16), grids.s, grids.ds, 0.1);
  Matrix K(8, 8);
  for (Index a = 0; a < 8; ++a) {
    for (Index b = 0; b < 8; ++b) K(a, b) = std::exp(-std::pow(grids.s(a) - grids.s(b), 2) / 0.02);
  }
  const Matrix ref = grids.ds * grids.ds * g * K * g.transpose();
  EXPECT_LE((sys.sigma - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
  EXPECT_LE((sys.sigma - g * sys.xi.transpose() * grids.ds).cwiseAbs().maxCoeff(),
            1e-12 * ref.cwiseAbs().maxCoeff());
  EXPECT_EQ(sys.sigma, sys.sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sys.sigma);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * es.eigenvalues().maxCoeff());
  EXPECT_EQ(sys.norm, NormKind::HGauss);
}

TEST(L2Rho, SquareSystemAtZeroLambdaIsInverse) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const Matrix g = oracle::random_matrix(4, 4, rng);
    const Vector f = oracle::random_vector(4, rng);
    const L2RhoSystem sys = assemble_l2rho(g, f, 0.25);
    SolverParams p;
    p.lambda = 0.0;
    p.rank_tol = 0.0;
    const Vector expected = (g * 0.25).lu().solve(f);
    EXPECT_LE(oracle::rel_diff(solve_l2rho(sys, Method::TikhonovFixed, p).coefficients, expected), 1e-10);
    EXPECT_LE(oracle::rel_diff(solve_l2rho(sys, Method::MinimalNorm, p).coefficients, expected), 1e-10);
  }
}

TEST(L2Rho, UniformRhoIsOrdinaryTikhonov) {
  // Every column has absolute sum 2, so rho = 1 and B = I.
  Matrix g(3, 2);
  g << 1, -1, 0.5, 0.5, 0.5, 0.5;
  Vector f(3);
  f << 0.3, -0.2, 0.9;
  const L2RhoSystem sys = assemble_l2rho(g, f, 0.5);
  EXPECT_LE((sys.rho - Vector::Ones(2)).norm(), 1e-15);
  SolverParams p;
  p.lambda = 0.05;
  const Matrix A = 0.5 * g;
  const Vector expected = (A.transpose() * A + 3.0 * p.lambda * Matrix::Identity(2, 2)).ldlt().solve(A.transpose() * f);
  EXPECT_LE(oracle::rel_diff(solve_l2rho(sys, Method::TikhonovFixed, p).coefficients, expected), 1e-12);
}

TEST(L2Rho, MatchesWeightedNormalEquations) {
  for (Example e : {Example::Integral, Example::Nonlocal, Example::Aggregation}) {
    const Dataset d = generate_dataset(e, true_kernel(e), 4, 4, 3, 0.1, 55);
    const L2RhoSystem sys = assemble_l2rho(d.g, d.f, d.grids.ds);
    const double n = static_cast<double>(sys.rows());
    // Cells without exploration mass carry no penalty and no data; the estimate is zero there.
    std::vector<Index> cells;
    for (Index l = 0; l < sys.rho.size(); ++l) {
      if (sys.rho(l) > 0.0) cells.push_back(l);
    }
    const Matrix A = sys.A(Eigen::all, cells);
    const Matrix B = sys.rho(cells).asDiagonal();
    const double top = thin_svd(sys.A_tilde).singular_values(0);
    for (double rel : {1e-4, 1e-2, 1.0}) {
      SolverParams p;
      p.lambda = rel * top * top / n;
      Vector expected = Vector::Zero(sys.rho.size());
      const Vector active = (A.transpose() * A + n * p.lambda * B).ldlt().solve(A.transpose() * sys.f);
      expected(cells) = active;
      EXPECT_LE(oracle::rel_diff(solve_l2rho(sys, Method::TikhonovFixed, p).coefficients, expected), 1e-8)
          << to_string(e) << " rel " << rel;
    }
  }
}

TEST(L2Rho, WeightedNormIdentity) {
  std::mt19937_64 rng(7);
  const Matrix g = oracle::random_matrix(10, 5, rng);
  const L2RhoSystem sys = assemble_l2rho(g, Vector::Zero(10), 0.2);
  const Vector ct = oracle::random_vector(5, rng);
  const Vector c = sys.to_phi(ct);
  EXPECT_NEAR(c.dot(sys.rho.asDiagonal() * c), ct.squaredNorm(), 1e-12 * ct.squaredNorm());
  EXPECT_LE((sys.A_tilde * ct - sys.A * c).norm(), 1e-12 * (sys.A * c).norm());
}

TEST(L2Rho, ZeroRhoCellsAreExcluded) {
  std::mt19937_64 rng(9);
  Matrix g = oracle::random_matrix(10, 5, rng);
  g.col(2).setZero();
  const Vector f = oracle::random_vector(10, rng);
  const L2RhoSystem sys = assemble_l2rho(g, f, 0.2);
  EXPECT_EQ(sys.active.size(), 4u);
  EXPECT_EQ(sys.A_tilde.cols(), 4);
  SolverParams p;
  p.l_max = 10;
  p.noise_norm = 0.1;
  for (Method m : {Method::TikhonovGCV, Method::TikhonovFixed, Method::IterativeDP, Method::Hybrid}) {
    EXPECT_EQ(solve_l2rho(sys, m, p).phi_values(2), 0.0);
  }
}

TEST(L2Rho, DegenerateThrows) {
  EXPECT_THROW(assemble_l2rho(Matrix::Zero(4, 2), Vector::Ones(4), 0.5), DegenerateDataError);
}

TEST(Baselines, EveryMethodRunsOnEveryNorm) {
  const Dataset d = generate_dataset(Example::Integral, true_kernel(Example::Integral), 20, 20, 3, 0.1, 2);
  const GaussianSystem gs = assemble_gaussian(d.g, d.f, d.grids.s, d.grids.ds);
  const L2RhoSystem ls = assemble_l2rho(d.g, d.f, d.grids.ds);
  SolverParams p;
  p.l_max = 20;
  p.lambda = 1e-4;
  p.noise_norm = d.noise.norm();
  p.error_of = [](const Vector& phi) { return phi.norm(); };
  for (Method m : {Method::TikhonovLC, Method::TikhonovGCV, Method::IterativeLC, Method::IterativeDP,
                   Method::Hybrid, Method::MinimalNorm, Method::TikhonovFixed, Method::IterativeOptimal}) {
    const Estimate a = solve(gs, m, p);
    EXPECT_TRUE(a.phi_values.allFinite()) << to_string(m);
    EXPECT_EQ(a.phi_values.size(), 20);
    EXPECT_EQ(a.norm_kind, NormKind::HGauss);
    const Estimate b = solve_l2rho(ls, m, p);
    EXPECT_TRUE(b.phi_values.allFinite()) << to_string(m);
    EXPECT_EQ(b.phi_values.size(), 20);
    EXPECT_EQ(b.solver_kind, m);
    EXPECT_EQ(b.report.method, m);
  }
}
