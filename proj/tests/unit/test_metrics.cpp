#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kernelop/grids.hpp"
#include "kernelop/metrics.hpp"
#include "oracles.hpp"

using namespace kernelop;

TEST(RelativeError, Examples) {
  Vector phi(3);
  phi << 1.0, -2.0, 0.5;
  EXPECT_EQ(relative_l2_error(phi, phi, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(relative_l2_error(Vector::Zero(3), phi, 0.1), 1.0);
  EXPECT_DOUBLE_EQ(relative_l2_error(2.0 * phi, phi, 0.1), 1.0);
  EXPECT_THROW(relative_l2_error(phi, Vector::Zero(3), 0.1), std::invalid_argument);
  EXPECT_THROW(relative_l2_error(phi, Vector::Zero(2), 0.1), std::invalid_argument);
}

TEST(RelativeError, ScaleEquivariant) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Vector a = oracle::random_vector(7, rng);
    const Vector b = oracle::random_vector(7, rng);
    const double c = 0.1 + 3.0 * t;
    EXPECT_NEAR(relative_l2_error(c * a, c * b, 0.2), relative_l2_error(a, b, 0.2), 1e-12);
  }
}

TEST(RelativeError, KernelOverload) {
  const Grids g = build_grids(10, 10);
  const Kernel truth = true_kernel(Example::Integral);
  Vector phi(10);
  for (int l = 0; l < 10; ++l) phi(l) = truth(g.s(l));
  EXPECT_LE(relative_l2_error(phi, truth, g), 1e-15);
  EXPECT_DOUBLE_EQ(relative_l2_error(Vector::Zero(10), truth, g), 1.0);
}

TEST(Quantile, TypeSeven) {
  const std::vector<double> v{5, 1, 4, 2, 3};
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 2.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.75), 4.0);
  EXPECT_DOUBLE_EQ(quantile({1, 2}, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_THROW(quantile({}, 0.5), std::invalid_argument);
  EXPECT_THROW(quantile({1}, 1.5), std::invalid_argument);
}

TEST(BoxStats, SingleValueAndOutliers) {
  const BoxStats one = box_stats({0.7});
  EXPECT_EQ(one.median, 0.7);
  EXPECT_EQ(one.q1, 0.7);
  EXPECT_EQ(one.q3, 0.7);
  EXPECT_EQ(one.whisker_low, 0.7);
  EXPECT_EQ(one.whisker_high, 0.7);

  const BoxStats b = box_stats({1, 2, 3, 4, 100});
  EXPECT_EQ(b.median, 3.0);
  EXPECT_EQ(b.whisker_low, 1.0);
  EXPECT_EQ(b.whisker_high, 4.0);
  ASSERT_EQ(b.outliers.size(), 1u);
  EXPECT_EQ(b.outliers[0], 100.0);
}

TEST(Summarize, GroupsInFirstAppearanceOrder) {
  std::vector<RunSummary> runs;
  for (int i = 1; i <= 5; ++i) {
    RunSummary r;
    r.example = Example::Nonlocal;
    r.norm = NormKind::L2rho;
    r.solver = Method::Hybrid;
    r.nsr = 0.1;
    r.n0 = 30;
    r.relative_error = i;
    r.wall_time_seconds = 10 * i;
    runs.push_back(r);
    RunSummary other = r;
    other.norm = NormKind::HGbar;
    other.relative_error = 0.5;
    runs.push_back(other);
  }
  const std::vector<GroupSummary> groups = summarize(runs);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].norm, NormKind::L2rho);
  EXPECT_EQ(groups[0].example, Example::Nonlocal);
  EXPECT_EQ(groups[0].solver, Method::Hybrid);
  EXPECT_EQ(groups[0].n0, 30);
  EXPECT_EQ(groups[0].count, 5u);
  EXPECT_DOUBLE_EQ(groups[0].error.median, 3.0);
  EXPECT_DOUBLE_EQ(groups[0].error.q1, 2.0);
  EXPECT_DOUBLE_EQ(groups[0].error.q3, 4.0);
  EXPECT_DOUBLE_EQ(groups[0].median_time_seconds, 30.0);
  EXPECT_DOUBLE_EQ(groups[1].error.median, 0.5);

  std::ostringstream out;
  write_summary_csv(out, groups);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kSummaryCsvHeader);
  EXPECT_EQ(header, "example,norm,solver,nsr,n0,count,median,q1,q3,whisker_low,whisker_high,n_outliers,median_time_s");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 2);
}

TEST(RunCsv, RoundTrip) {
  std::vector<RunSummary> runs(3);
  runs[0] = {Example::Integral, NormKind::HGbar, Method::TikhonovLC, 0.1, 30, 1, 0.0123456789012345, 1.5, 3.2e-5};
  runs[1] = {Example::Nonlocal, NormKind::HGauss, Method::IterativeLC, 0.5, 12, 7, 0.2, 0.01, 14};
  runs[2] = {Example::Aggregation, NormKind::L2rho, Method::Hybrid, 0.03125, 6, 99, 1.1, 2.0, 1e-9};
  std::stringstream io;
  write_run_csv_header(io);
  for (const auto& r : runs) write_run_csv_row(io, r);
  EXPECT_EQ(io.str().substr(0, io.str().find('\n')), "example,norm,solver,nsr,n0,seed,rel_error,time_s,lambda_or_stop");
  const std::vector<RunSummary> back = read_run_csv(io);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].example, runs[i].example);
    EXPECT_EQ(back[i].norm, runs[i].norm);
    EXPECT_EQ(back[i].solver, runs[i].solver);
    EXPECT_EQ(back[i].nsr, runs[i].nsr);
    EXPECT_EQ(back[i].n0, runs[i].n0);
    EXPECT_EQ(back[i].seed, runs[i].seed);
    EXPECT_EQ(back[i].relative_error, runs[i].relative_error);
    EXPECT_EQ(back[i].wall_time_seconds, runs[i].wall_time_seconds);
    EXPECT_EQ(back[i].lambda_or_stop, runs[i].lambda_or_stop);
  }
  std::istringstream bad("a,b,c\n");
  EXPECT_THROW(read_run_csv(bad), std::runtime_error);
}
