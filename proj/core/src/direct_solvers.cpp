#include "kernelop/direct_solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kernelop {
namespace {

constexpr double kLogFloor = 1e-300;

double safe_log_sqrt(double sq) { return 0.5 * std::log(std::max(sq, kLogFloor)); }

Estimate make_estimate(const BasisSystem& system, Vector c, Method method) {
  Estimate est;
  est.phi_values = eval_estimate(system, c);
  est.coefficients = std::move(c);
  est.norm_kind = system.norm;
  est.solver_kind = method;
  est.report.method = method;
  return est;
}

}  // namespace

double SpectralProblem::residual_sq(double shift) const {
  double total = null_residual_sq;
  for (Index i = 0; i < gains.size(); ++i) {
    const double r = shift * coeffs(i) / (gains(i) + shift);
    total += r * r;
  }
  return total;
}

double SpectralProblem::solution_norm_sq(double shift) const {
  double total = 0.0;
  for (Index i = 0; i < gains.size(); ++i) {
    const double d = gains(i) + shift;
    total += gains(i) * coeffs(i) * coeffs(i) / (d * d);
  }
  return total;
}

double SpectralProblem::gcv(double shift) const {
  double trace = static_cast<double>(n);
  for (Index i = 0; i < gains.size(); ++i) trace -= gains(i) / (gains(i) + shift);
  return residual_sq(shift) / (trace * trace);
}

SpectralProblem spectral_problem(const EigenSystem& eig, const Vector& f) {
  if (eig.eigenvectors.rows() != f.size()) throw std::invalid_argument("spectral_problem: dimension mismatch");
  const Index n = f.size();
  const Index r = eig.rank;
  SpectralProblem p;
  p.n = n;
  p.gains = eig.eigenvalues.head(r);
  p.coeffs = eig.eigenvectors.leftCols(r).transpose() * f;
  if (r < n) p.null_residual_sq = (eig.eigenvectors.rightCols(n - r).transpose() * f).squaredNorm();
  return p;
}

SpectralProblem spectral_problem(const ThinSvd& svd, const Vector& f, double tol) {
  if (svd.U.rows() != f.size()) throw std::invalid_argument("spectral_problem: dimension mismatch");
  Index r = 0;
  while (r < svd.singular_values.size() && svd.singular_values(r) * svd.singular_values(r) > tol) ++r;
  SpectralProblem p;
  p.n = f.size();
  p.gains = svd.singular_values.head(r).array().square();
  p.coeffs = svd.U.leftCols(r).transpose() * f;
  p.null_residual_sq = (f - svd.U.leftCols(r) * p.coeffs).squaredNorm();
  return p;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: need 0 < lo <= hi and n >= 1");
  std::vector<double> grid(static_cast<std::size_t>(n));
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

LCurveResult select_lambda_lcurve(const SpectralProblem& problem, int n_grid) {
  if (problem.rank() < 2) throw std::invalid_argument("L-curve needs numerical rank >= 2");
  if (n_grid < 3) throw std::invalid_argument("L-curve needs at least 3 grid points");
  LCurveResult res;
  const double lo = problem.gains(problem.rank() - 1);
  const double hi = problem.gains(0);
  res.shifts = log_grid(lo, hi, n_grid);
  const std::size_t n = res.shifts.size();
  res.log_residual.resize(n);
  res.log_norm.resize(n);
  res.curvature.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    res.log_residual[i] = safe_log_sqrt(problem.residual_sq(res.shifts[i]));
    res.log_norm[i] = safe_log_sqrt(problem.solution_norm_sq(res.shifts[i]));
  }

  if (!(hi > lo)) {
    res.shift = lo;
    res.lambda = lo / static_cast<double>(problem.n);
    res.corner_found = false;
    return res;
  }

  const double h = (std::log(hi) - std::log(lo)) / static_cast<double>(n - 1);
  std::size_t best = 1;
  double best_kappa = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double& xm = res.log_residual[i - 1];
    const double& x0 = res.log_residual[i];
    const double& xp = res.log_residual[i + 1];
    const double& ym = res.log_norm[i - 1];
    const double& y0 = res.log_norm[i];
    const double& yp = res.log_norm[i + 1];
    const double dx = (xp - xm) / (2.0 * h);
    const double dy = (yp - ym) / (2.0 * h);
    const double ddx = (xp - 2.0 * x0 + xm) / (h * h);
    const double ddy = (yp - 2.0 * y0 + ym) / (h * h);
    const double speed = dx * dx + dy * dy;
    const double kappa = speed > 0.0 ? (dx * ddy - dy * ddx) / std::pow(speed, 1.5) : 0.0;
    res.curvature[i] = kappa;
    if (kappa > best_kappa) {
      best_kappa = kappa;
      best = i;
    }
  }
  res.corner_found = best_kappa > 0.0;
  res.shift = res.shifts[best];
  res.lambda = res.shift / static_cast<double>(problem.n);
  return res;
}

GcvResult select_lambda_gcv(const SpectralProblem& problem, int n_grid) {
  if (problem.rank() < 1) throw std::invalid_argument("GCV needs numerical rank >= 1");
  GcvResult res;
  res.shifts = log_grid(problem.gains(problem.rank() - 1), problem.gains(0), n_grid);
  res.values.resize(res.shifts.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < res.shifts.size(); ++i) {
    res.values[i] = problem.gcv(res.shifts[i]);
    if (res.values[i] < res.values[best]) best = i;
  }
  res.shift = res.shifts[best];
  res.lambda = res.shift / static_cast<double>(problem.n);
  return res;
}

Vector tikhonov_coefficients(const EigenSystem& eig, const Vector& f, double shift) {
  const Index r = eig.rank;
  const Vector coeffs = eig.eigenvectors.leftCols(r).transpose() * f;
  const Vector filtered = coeffs.array() / (eig.eigenvalues.head(r).array() + shift);
  return eig.eigenvectors.leftCols(r) * filtered;
}

Vector ridge_coefficients(const EigenSystem& eig, const Vector& f, double shift) {
  const Vector coeffs = eig.eigenvectors.transpose() * f;
  const Vector filtered = coeffs.array() / (eig.eigenvalues.array() + shift);
  return eig.eigenvectors * filtered;
}

Estimate minimal_norm_ls(const BasisSystem& system, const EigenSystem& eig) {
  Estimate est = make_estimate(system, tikhonov_coefficients(eig, system.f, 0.0), Method::MinimalNorm);
  est.report.lambda = 0.0;
  return est;
}

Estimate tikhonov(const BasisSystem& system, const EigenSystem& eig, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("tikhonov: lambda must be >= 0");
  const double shift = static_cast<double>(system.rows()) * lambda;
  Estimate est = make_estimate(system, tikhonov_coefficients(eig, system.f, shift), Method::TikhonovFixed);
  const SpectralProblem p = spectral_problem(eig, system.f);
  est.report.lambda = lambda;
  est.report.residual_history = {std::sqrt(p.residual_sq(shift))};
  est.report.solution_norm_history = {std::sqrt(p.solution_norm_sq(shift))};
  return est;
}

Estimate tikhonov_lcurve(const BasisSystem& system, const EigenSystem& eig, int n_grid) {
  const SpectralProblem p = spectral_problem(eig, system.f);
  const LCurveResult lc = select_lambda_lcurve(p, n_grid);
  Estimate est = make_estimate(system, tikhonov_coefficients(eig, system.f, lc.shift), Method::TikhonovLC);
  est.report.lambda = lc.lambda;
  for (std::size_t i = 0; i < lc.shifts.size(); ++i) {
    est.report.residual_history.push_back(std::exp(lc.log_residual[i]));
    est.report.solution_norm_history.push_back(std::exp(lc.log_norm[i]));
  }
  if (!lc.corner_found) est.report.add_flag("no corner");
  return est;
}

Estimate tikhonov_gcv(const BasisSystem& system, const EigenSystem& eig, int n_grid) {
  const SpectralProblem p = spectral_problem(eig, system.f);
  const GcvResult gcv = select_lambda_gcv(p, n_grid);
  Estimate est = make_estimate(system, tikhonov_coefficients(eig, system.f, gcv.shift), Method::TikhonovGCV);
  est.report.lambda = gcv.lambda;
  for (double shift : gcv.shifts) {
    est.report.residual_history.push_back(std::sqrt(p.residual_sq(shift)));
    est.report.solution_norm_history.push_back(std::sqrt(p.solution_norm_sq(shift)));
  }
  return est;
}

}  // namespace kernelop
