#include "kernelop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kernelop {

double relative_l2_error(const Vector& phi_hat, const Vector& phi_true, double ds) {
  if (phi_hat.size() != phi_true.size()) throw std::invalid_argument("relative_l2_error: dimension mismatch");
  const double denom = std::sqrt(phi_true.squaredNorm() * ds);
  if (!(denom > 0.0)) throw std::invalid_argument("relative_l2_error: true kernel has zero norm");
  return std::sqrt((phi_hat - phi_true).squaredNorm() * ds) / denom;
}

double relative_l2_error(const Vector& phi_hat, const Kernel& truth, const Grids& grids) {
  Vector phi(grids.s.size());
  for (Index l = 0; l < grids.s.size(); ++l) phi(l) = truth(grids.s(l));
  return relative_l2_error(phi_hat, phi, grids.ds);
}

void write_run_csv_header(std::ostream& out) { out << kRunCsvHeader << '\n'; }

void write_run_csv_row(std::ostream& out, const RunSummary& run) {
  std::ostringstream row;
  row.precision(std::numeric_limits<double>::max_digits10);
  row << to_string(run.example) << ',' << to_string(run.norm) << ',' << to_string(run.solver) << ',' << run.nsr << ','
      << run.n0 << ',' << run.seed << ',' << run.relative_error << ',' << run.wall_time_seconds << ','
      << run.lambda_or_stop << '\n';
  out << row.str();
}

std::vector<RunSummary> read_run_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRunCsvHeader) throw std::runtime_error("run CSV: unexpected header '" + line + "'");
  std::vector<RunSummary> runs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error("run CSV: expected 9 columns in '" + line + "'");
    RunSummary r;
    r.example = parse_example(cells[0]);
    r.norm = parse_norm(cells[1]);
    r.solver = parse_method(cells[2]);
    r.nsr = std::stod(cells[3]);
    r.n0 = std::stoi(cells[4]);
    r.seed = std::stoull(cells[5]);
    r.relative_error = std::stod(cells[6]);
    r.wall_time_seconds = std::stod(cells[7]);
    r.lambda_or_stop = std::stod(cells[8]);
    runs.push_back(r);
  }
  return runs;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BoxStats box_stats(const std::vector<double>& values) {
  BoxStats b;
  b.median = quantile(values, 0.5);
  b.q1 = quantile(values, 0.25);
  b.q3 = quantile(values, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
    } else {
      b.whisker_low = std::min(b.whisker_low, v);
      b.whisker_high = std::max(b.whisker_high, v);
    }
  }
  std::sort(b.outliers.begin(), b.outliers.end());
  return b;
}

std::vector<GroupSummary> summarize(const std::vector<RunSummary>& runs) {
  struct Acc {
    GroupSummary g;
    std::vector<double> errors;
    std::vector<double> times;
  };
  std::vector<Acc> groups;
  for (const RunSummary& r : runs) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Acc& a) {
      return a.g.example == r.example && a.g.norm == r.norm && a.g.solver == r.solver && a.g.nsr == r.nsr &&
             a.g.n0 == r.n0;
    });
    if (it == groups.end()) {
      Acc a;
      a.g.example = r.example;
      a.g.norm = r.norm;
      a.g.solver = r.solver;
      a.g.nsr = r.nsr;
      a.g.n0 = r.n0;
      groups.push_back(std::move(a));
      it = std::prev(groups.end());
    }
    it->errors.push_back(r.relative_error);
    it->times.push_back(r.wall_time_seconds);
  }
  std::vector<GroupSummary> out;
  out.reserve(groups.size());
  for (Acc& a : groups) {
    a.g.count = a.errors.size();
    a.g.error = box_stats(a.errors);
    a.g.median_time_seconds = quantile(a.times, 0.5);
    out.push_back(std::move(a.g));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<GroupSummary>& groups) {
  out << kSummaryCsvHeader << '\n';
  std::ostringstream rows;
  rows.precision(10);
  for (const GroupSummary& g : groups) {
    rows << to_string(g.example) << ',' << to_string(g.norm) << ',' << to_string(g.solver) << ',' << g.nsr << ','
         << g.n0 << ',' << g.count << ',' << g.error.median << ',' << g.error.q1 << ',' << g.error.q3 << ','
         << g.error.whisker_low << ',' << g.error.whisker_high << ',' << g.error.outliers.size() << ','
         << g.median_time_seconds << '\n';
  }
  out << rows.str();
}

}  // namespace kernelop
