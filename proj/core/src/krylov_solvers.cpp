#include "kernelop/krylov_solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace kernelop {

GkbLsqr::GkbLsqr(std::unique_ptr<LowerBidiagonalization> process, const Vector& b, double residual_offset_sq,
                 Vector data)
    : process_(std::move(process)), offset_sq_(residual_offset_sq), data_(std::move(data)) {
  c_ = Vector::Zero(process_->domain_dim());
  const bool ok = process_->start(b);
  phibar_ = process_->betas()[0];
  rhobar_ = process_->alphas()[0];
  if (!ok) {
    terminated_ = true;
    w_ = Vector::Zero(process_->domain_dim());
    return;
  }
  w_ = process_->q(0);
}

bool GkbLsqr::step() {
  if (terminated_) return false;
  const bool ok = process_->extend();
  const auto i = static_cast<std::size_t>(l_);
  const double beta = process_->betas()[i + 1];
  const double alpha = process_->alphas()[i + 1];

  const double rho = std::hypot(rhobar_, beta);
  if (!(rho > 0.0)) {
    terminated_ = true;
    return false;
  }
  const double cbar = rhobar_ / rho;
  const double sbar = beta / rho;
  const double theta = sbar * alpha;
  rhobar_ = -cbar * alpha;
  const double phi = cbar * phibar_;
  phibar_ = sbar * phibar_;

  c_ += (phi / rho) * w_;
  if (ok) w_ = process_->q(static_cast<int>(i) + 1) - (theta / rho) * w_;

  rhos_.push_back(rho);
  thetas_.push_back(theta);
  phis_.push_back(phi);
  ++l_;
  if (!ok) terminated_ = true;
  return true;
}

double GkbLsqr::residual_norm() const {
  if (data_.size() == 0) return std::sqrt(phibar_ * phibar_ + offset_sq_);
  if (l_ == 0) return data_.norm();
  return (process_->image(y()) - data_).norm();
}

Vector GkbLsqr::y() const {
  Vector y(l_);
  for (int i = l_ - 1; i >= 0; --i) {
    const auto u = static_cast<std::size_t>(i);
    double v = phis_[u];
    if (i + 1 < l_) v -= thetas_[u] * y(i + 1);
    y(i) = v / rhos_[u];
  }
  return y;
}

double GkbLsqr::solution_norm() const { return y().norm(); }

ProjectionResult project_f(const Matrix& sigma, const Vector& f, double tol, int max_iter) {
  ProjectionResult res;
  const Vector b = sigma * f;
  const double bnorm = b.norm();
  if (!(bnorm > 0.0)) {
    res.v = Vector::Zero(f.size());
    return res;
  }
  GkbLsqr lsqr(std::make_unique<EuclideanGkb>(sigma, std::max(max_iter, 1)), b);
  while (lsqr.iteration() < max_iter && std::abs(lsqr.phi_bar()) > tol * bnorm) {
    if (!lsqr.step()) break;
  }
  res.v = lsqr.c();
  res.iterations = lsqr.iteration();
  res.relative_residual = std::abs(lsqr.phi_bar()) / bnorm;
  return res;
}

double menger_curvature(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double ax = x1 - x0, ay = y1 - y0;
  const double bx = x2 - x1, by = y2 - y1;
  const double cx = x2 - x0, cy = y2 - y0;
  const double denom = std::sqrt((ax * ax + ay * ay) * (bx * bx + by * by) * (cx * cx + cy * cy));
  if (!(denom > 0.0)) return 0.0;
  return 2.0 * (ax * by - ay * bx) / denom;
}

namespace {

constexpr double kLogFloor = 1e-300;
// L-curve triples with a leg shorter than this fraction of the curve's extent are skipped: once
// the iteration stalls, consecutive points coincide to rounding and their curvature is noise.
constexpr double kMinLegRel = 1e-4;

SolverReport base_report(Method method) {
  SolverReport r;
  r.method = method;
  return r;
}

}  // namespace

KrylovOutcome run_lsqr(KrylovProblem problem, StopRule rule, const SolverParams& params) {
  if (params.l_max < 1) throw std::invalid_argument("Krylov solvers need l_max >= 1");
  if (rule == StopRule::Discrepancy && !params.noise_norm) {
    throw std::invalid_argument("discrepancy principle requires the noise norm");
  }
  const Method method = rule == StopRule::Discrepancy ? Method::IterativeDP : Method::IterativeLC;
  KrylovOutcome out;
  out.report = base_report(method);
  GkbLsqr lsqr(std::move(problem.process), problem.b, problem.residual_offset_sq, std::move(problem.data));

  std::vector<Vector> snapshots;
  std::vector<double> xs;
  std::vector<double> ys;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  int candidate = -1;  // 0-based index into the histories
  double candidate_score = 0.0;
  bool fired = false;
  const double threshold = rule == StopRule::Discrepancy ? params.dp_tau * *params.noise_norm : 0.0;

  while (lsqr.iteration() < params.l_max) {
    if (!lsqr.step()) break;
    const double res = lsqr.residual_norm();
    const double nrm = lsqr.solution_norm();
    out.report.residual_history.push_back(res);
    out.report.solution_norm_history.push_back(nrm);

    if (rule == StopRule::Discrepancy && res <= threshold) {
      fired = true;
      break;
    }
    if (rule == StopRule::LCurve) {
      snapshots.push_back(lsqr.c());
      xs.push_back(std::log(std::max(res, kLogFloor)));
      ys.push_back(std::log(std::max(nrm, kLogFloor)));
      const std::size_t k = xs.size();
      x_lo = std::min(x_lo, xs.back());
      x_hi = std::max(x_hi, xs.back());
      y_lo = std::min(y_lo, ys.back());
      y_hi = std::max(y_hi, ys.back());
      const double min_leg = kMinLegRel * std::hypot(x_hi - x_lo, y_hi - y_lo);
      auto leg = [&](std::size_t i) { return std::hypot(xs[i + 1] - xs[i], ys[i + 1] - ys[i]); };
      if (k >= 3 && leg(k - 3) > min_leg && leg(k - 2) > min_leg) {
        const double score = -menger_curvature(xs[k - 3], ys[k - 3], xs[k - 2], ys[k - 2], xs[k - 1], ys[k - 1]);
        if (score > candidate_score) {
          candidate_score = score;
          candidate = static_cast<int>(k) - 2;
        }
      }
      if (candidate >= 0 && static_cast<int>(k) - 1 >= candidate + params.lc_window) {
        fired = true;
        break;
      }
    }
    if (lsqr.terminated()) break;
  }

  const int last = lsqr.iteration();
  if (rule == StopRule::LCurve && candidate >= 0) {
    out.coefficients = snapshots[static_cast<std::size_t>(candidate)];
    out.report.stop_iteration = candidate + 1;
    if (!fired) out.report.add_flag("window_incomplete");
  } else {
    out.coefficients = lsqr.c();
    out.report.stop_iteration = last;
  }
  if (!fired) {
    if (lsqr.terminated()) {
      out.report.add_flag("terminated");
    } else if (!(rule == StopRule::LCurve && candidate >= 0)) {
      out.report.add_flag("no stop");
    }
  }
  return out;
}

KrylovOutcome run_lsqr_optimal(KrylovProblem problem, const SolverParams& params) {
  if (params.l_max < 1) throw std::invalid_argument("Krylov solvers need l_max >= 1");
  if (!params.error_of || !problem.to_phi) throw std::invalid_argument("oracle-optimal stopping needs an error functional");
  KrylovOutcome out;
  out.report = base_report(Method::IterativeOptimal);
  GkbLsqr lsqr(std::move(problem.process), problem.b, problem.residual_offset_sq, std::move(problem.data));
  double best = std::numeric_limits<double>::infinity();
  out.coefficients = lsqr.c();
  while (lsqr.iteration() < params.l_max) {
    if (!lsqr.step()) break;
    out.report.residual_history.push_back(lsqr.residual_norm());
    out.report.solution_norm_history.push_back(lsqr.solution_norm());
    const double err = params.error_of(problem.to_phi(lsqr.c()));
    if (err < best) {
      best = err;
      out.coefficients = lsqr.c();
      out.report.stop_iteration = lsqr.iteration();
    }
    if (lsqr.terminated()) break;
  }
  if (!out.report.stop_iteration) out.report.stop_iteration = 0;
  return out;
}

double wgcv(const Vector& s, const Vector& ghat, double omega, double lambda, double dof, double offset_sq) {
  const Index k = s.size();
  double num = offset_sq;
  double trace = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double d = s(i) * s(i) + lambda;
    const double r = lambda * ghat(i) / d;
    num += r * r;
    trace += s(i) * s(i) / d;
  }
  for (Index i = k; i < ghat.size(); ++i) num += ghat(i) * ghat(i);
  const double den = dof - omega * trace;
  return num / (den * den);
}

double wgcv_omega_estimate(const Vector& s, const Vector& ghat, double dof, double offset_sq) {
  const Index k = s.size();
  const double alpha2 = s(k - 1) * s(k - 1);
  double t0 = offset_sq;
  for (Index i = k; i < ghat.size(); ++i) t0 += ghat(i) * ghat(i);
  double t1 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0, v2 = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double s2 = s(i) * s(i);
    const double tt = 1.0 / (s2 + alpha2);
    const double tt3 = tt * tt * tt;
    t1 += s2 * tt;
    t3 += ghat(i) * ghat(i) * alpha2 * s2 * tt3;
    t4 += s2 * tt * tt;
    const double a = alpha2 * ghat(i) * tt;
    t5 += a * a;
    v2 += ghat(i) * ghat(i) * s2 * tt3;
  }
  const double denom = t1 * t3 + t4 * (t5 + t0);
  const double omega = dof * alpha2 * v2 / denom;
  if (!std::isfinite(omega) || !(omega > 0.0)) return 1.0;
  return std::min(omega, 1.0);
}

namespace {

double argmin_wgcv(const Vector& s, const Vector& ghat, double omega, double dof, double offset_sq) {
  auto wgcv_at = [&](double lambda) { return wgcv(s, ghat, omega, lambda, dof, offset_sq); };
  const double smax2 = s(0) * s(0);
  const double lo = std::log(smax2 * 1e-14);
  const double hi = std::log(smax2);
  constexpr int kGrid = 121;
  const double h = (hi - lo) / (kGrid - 1);
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double v = wgcv_at(std::exp(lo + h * i));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  // golden-section refinement in log(lambda) on the bracketing cells
  double a = lo + h * std::max(best - 1, 0);
  double b = lo + h * std::min(best + 1, kGrid - 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = wgcv_at(std::exp(x1));
  double f2 = wgcv_at(std::exp(x2));
  for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = wgcv_at(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = wgcv_at(std::exp(x2));
    }
  }
  const double refined = 0.5 * (a + b);
  return wgcv_at(std::exp(refined)) <= best_val ? std::exp(refined) : std::exp(lo + h * best);
}

}  // namespace

KrylovOutcome run_hybrid_lsqr(KrylovProblem problem, const SolverParams& params, Index n) {
  if (params.l_max < 1) throw std::invalid_argument("Krylov solvers need l_max >= 1");
  KrylovOutcome out;
  out.report = base_report(Method::Hybrid);
  LowerBidiagonalization& gkb = *problem.process;
  out.coefficients = Vector::Zero(gkb.domain_dim());
  if (!gkb.start(problem.b)) {
    out.report.add_flag("terminated");
    out.report.stop_iteration = 0;
    out.report.lambda = 0.0;
    return out;
  }
  const double beta1 = gkb.betas()[0];
  // The GCV is taken against all N observations: the data outside the start vector enter as a
  // fixed residual, so at l = rank with omega = 1 this is the direct GCV function.
  const double dof = static_cast<double>(problem.b.size());
  double omega_sum = 0.0;
  int stable = 0;
  double prev_res = -1.0;
  bool stabilized = false;

  for (int l = 1; l <= params.l_max; ++l) {
    const bool ok = gkb.extend();
    const Matrix B = bidiagonal_matrix(gkb, l);
    Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const Vector s = svd.singularValues();
    const Vector ghat = beta1 * svd.matrixU().row(0).transpose();

    double shift = 0.0;
    if (params.hybrid_fixed_lambda) {
      shift = static_cast<double>(n) * *params.hybrid_fixed_lambda;
    } else if (s(0) > 0.0) {
      omega_sum += wgcv_omega_estimate(s, ghat, dof, problem.residual_offset_sq);
      shift = argmin_wgcv(s, ghat, omega_sum / l, dof, problem.residual_offset_sq);
    }

    Vector filt(l);
    double reg_res_sq = 0.0;
    for (int i = 0; i < l; ++i) {
      const double d = s(i) * s(i) + shift;
      filt(i) = d > 0.0 ? s(i) * ghat(i) / d : 0.0;
      const double r = d > 0.0 ? shift * ghat(i) / d : ghat(i);
      reg_res_sq += r * r;
    }
    reg_res_sq += ghat(l) * ghat(l);
    const Vector y = svd.matrixV() * filt;
    out.coefficients = gkb.Q(l) * y;
    const double res = problem.data.size() == 0 ? std::sqrt(reg_res_sq + problem.residual_offset_sq)
                                                : (gkb.image(y) - problem.data).norm();
    out.report.residual_history.push_back(res);
    out.report.solution_norm_history.push_back(y.norm());
    out.report.lambda = shift / static_cast<double>(n);
    out.report.stop_iteration = l;

    if (prev_res > 0.0 && std::abs(res - prev_res) < params.hybrid_stab_tol * prev_res) {
      ++stable;
    } else {
      stable = 0;
    }
    prev_res = res;
    if (stable >= params.hybrid_stab_window) {
      stabilized = true;
      break;
    }
    if (!ok) {
      out.report.add_flag("terminated");
      break;
    }
  }
  if (!stabilized && !out.report.has_flag("terminated")) out.report.add_flag("no stop");
  return out;
}

KrylovProblem sigma_problem(const BasisSystem& system, const SolverParams& params) {
  KrylovProblem p;
  if (params.project_rhs) {
    ProjectionResult pr = project_f(system.sigma, system.f, params.project_tol, params.project_max_iter);
    p.residual_offset_sq = (system.f - pr.v).squaredNorm();
    p.b = std::move(pr.v);
    p.data = system.f;
  } else {
    p.b = system.f;
  }
  p.process = std::make_unique<SigmaGkb>(system.sigma, params.l_max + 1);
  p.to_phi = [&system](const Vector& c) { return eval_estimate(system, c); };
  return p;
}

namespace {

Estimate to_estimate(const BasisSystem& system, KrylovOutcome outcome) {
  Estimate est;
  est.phi_values = eval_estimate(system, outcome.coefficients);
  est.coefficients = std::move(outcome.coefficients);
  est.norm_kind = system.norm;
  est.solver_kind = outcome.report.method;
  est.report = std::move(outcome.report);
  return est;
}

}  // namespace

Estimate run_iterative(const BasisSystem& system, StopRule rule, const SolverParams& params) {
  return to_estimate(system, run_lsqr(sigma_problem(system, params), rule, params));
}

Estimate run_iterative_optimal(const BasisSystem& system, const SolverParams& params) {
  return to_estimate(system, run_lsqr_optimal(sigma_problem(system, params), params));
}

Estimate run_hybrid(const BasisSystem& system, const SolverParams& params) {
  return to_estimate(system, run_hybrid_lsqr(sigma_problem(system, params), params, system.rows()));
}

}  // namespace kernelop
