#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kernelop/grids.hpp"

namespace kernelop {

/// ||phi_hat - phi|| / ||phi|| with Riemann weights ds on the s-cells. Throws for phi = 0.
double relative_l2_error(const Vector& phi_hat, const Vector& phi_true, double ds);
double relative_l2_error(const Vector& phi_hat, const Kernel& truth, const Grids& grids);

struct RunSummary {
  Example example = Example::Integral;
  NormKind norm = NormKind::HGbar;
  Method solver = Method::TikhonovLC;
  double nsr = 0.0;
  int n0 = 0;
  std::uint64_t seed = 0;
  double relative_error = 0.0;
  double wall_time_seconds = 0.0;
  double lambda_or_stop = 0.0;
};

inline constexpr const char* kRunCsvHeader =
    "example,norm,solver,nsr,n0,seed,rel_error,time_s,lambda_or_stop";

void write_run_csv_header(std::ostream& out);
void write_run_csv_row(std::ostream& out, const RunSummary& run);
std::vector<RunSummary> read_run_csv(std::istream& in);

/// Linear interpolation between order statistics at position p (n - 1).
double quantile(std::vector<double> values, double p);

struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // smallest value >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // largest value <= q3 + 1.5 IQR
  std::vector<double> outliers;
};

BoxStats box_stats(const std::vector<double>& values);

struct GroupSummary {
  Example example = Example::Integral;
  NormKind norm = NormKind::HGbar;
  Method solver = Method::TikhonovLC;
  double nsr = 0.0;
  int n0 = 0;
  std::size_t count = 0;
  BoxStats error;
  double median_time_seconds = 0.0;
};

/// Groups by (example, norm, solver, nsr, n0) in order of first appearance.
std::vector<GroupSummary> summarize(const std::vector<RunSummary>& runs);

inline constexpr const char* kSummaryCsvHeader =
    "example,norm,solver,nsr,n0,count,median,q1,q3,whisker_low,whisker_high,n_outliers,median_time_s";

void write_summary_csv(std::ostream& out, const std::vector<GroupSummary>& groups);

}  // namespace kernelop
