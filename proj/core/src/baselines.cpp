#include "kernelop/baselines.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "kernelop/direct_solvers.hpp"
#include "kernelop/krylov_solvers.hpp"

namespace kernelop {

Matrix gaussian_gram(const Vector& s, double sigma0) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("gaussian_gram: sigma0 must be positive");
  const Index n = s.size();
  Matrix K(n, n);
  const double scale = 1.0 / (2.0 * sigma0 * sigma0);
  for (Index b = 0; b < n; ++b) {
    for (Index a = 0; a < n; ++a) {
      const double d = s(a) - s(b);
      K(a, b) = std::exp(-d * d * scale);
    }
  }
  return K;
}

GaussianSystem assemble_gaussian(const Matrix& g, const Vector& f, const Vector& s, double ds, double sigma0) {
  if (g.rows() != f.size() || g.cols() != s.size()) throw std::invalid_argument("assemble_gaussian: dimension mismatch");
  GaussianSystem sys;
  sys.norm = NormKind::HGauss;
  sys.ds = ds;
  sys.sigma0 = sigma0;
  sys.f = f;
  sys.K = gaussian_gram(s, sigma0);
  sys.xi.noalias() = g * sys.K * ds;
  sys.sigma.resize(g.rows(), g.rows());
  sys.sigma.noalias() = g * sys.xi.transpose() * ds;
  symmetrize(sys.sigma);
  return sys;
}

Vector L2RhoSystem::to_phi(const Vector& ctilde) const {
  Vector c = Vector::Zero(cells());
  for (std::size_t a = 0; a < active.size(); ++a) {
    const auto i = static_cast<Index>(a);
    c(active[a]) = B_half_inv(i) * ctilde(i);
  }
  return c;
}

L2RhoSystem assemble_l2rho(const Matrix& g, const Vector& f, double ds) {
  if (g.rows() != f.size()) throw std::invalid_argument("assemble_l2rho: dimension mismatch");
  L2RhoSystem sys;
  sys.ds = ds;
  sys.f = f;
  sys.A = g * ds;
  sys.rho = build_exploration_measure(g, ds);
  for (Index l = 0; l < sys.rho.size(); ++l) {
    if (sys.rho(l) > 0.0) sys.active.push_back(l);
  }
  const auto m = static_cast<Index>(sys.active.size());
  sys.B_half_inv.resize(m);
  sys.A_tilde.resize(g.rows(), m);
  for (Index a = 0; a < m; ++a) {
    const Index l = sys.active[static_cast<std::size_t>(a)];
    sys.B_half_inv(a) = 1.0 / std::sqrt(sys.rho(l));
    sys.A_tilde.col(a) = sys.A.col(l) * sys.B_half_inv(a);
  }
  return sys;
}

namespace {

Vector svd_filtered(const ThinSvd& svd, const SpectralProblem& p, double shift) {
  const Index r = p.rank();
  Vector z(r);
  for (Index i = 0; i < r; ++i) {
    const double s = svd.singular_values(i);
    z(i) = s * p.coeffs(i) / (s * s + shift);
  }
  return svd.V.leftCols(r) * z;
}

}  // namespace

Estimate solve_l2rho(const L2RhoSystem& system, Method method, const SolverParams& params, const ThinSvd* svd) {
  const auto t0 = std::chrono::steady_clock::now();
  Estimate est;
  est.norm_kind = NormKind::L2rho;
  est.solver_kind = method;
  est.report.method = method;
  const Index n = system.rows();
  Vector ctilde;

  switch (method) {
    case Method::TikhonovLC:
    case Method::TikhonovGCV:
    case Method::TikhonovFixed:
    case Method::MinimalNorm: {
      ThinSvd local;
      if (!svd) {
        local = thin_svd(system.A_tilde);
        svd = &local;
      }
      const SpectralProblem p = spectral_problem(*svd, system.f, params.rank_tol);
      double shift = 0.0;
      if (method == Method::TikhonovLC) {
        const LCurveResult lc = select_lambda_lcurve(p, params.lambda_grid);
        shift = lc.shift;
        if (!lc.corner_found) est.report.add_flag("no corner");
        for (std::size_t i = 0; i < lc.shifts.size(); ++i) {
          est.report.residual_history.push_back(std::exp(lc.log_residual[i]));
          est.report.solution_norm_history.push_back(std::exp(lc.log_norm[i]));
        }
      } else if (method == Method::TikhonovGCV) {
        const GcvResult gcv = select_lambda_gcv(p, params.lambda_grid);
        shift = gcv.shift;
        for (double sh : gcv.shifts) {
          est.report.residual_history.push_back(std::sqrt(p.residual_sq(sh)));
          est.report.solution_norm_history.push_back(std::sqrt(p.solution_norm_sq(sh)));
        }
      } else if (method == Method::TikhonovFixed) {
        if (!(params.lambda >= 0.0)) throw std::invalid_argument("tikhonov: lambda must be >= 0");
        shift = static_cast<double>(n) * params.lambda;
      }
      if (method == Method::TikhonovFixed || method == Method::MinimalNorm) {
        est.report.residual_history = {std::sqrt(p.residual_sq(shift))};
        est.report.solution_norm_history = {std::sqrt(p.solution_norm_sq(shift))};
      }
      ctilde = svd_filtered(*svd, p, shift);
      est.report.lambda = shift / static_cast<double>(n);
      break;
    }
    case Method::IterativeLC:
    case Method::IterativeDP:
    case Method::IterativeOptimal:
    case Method::Hybrid: {
      KrylovProblem prob;
      prob.b = system.f;
      prob.process = std::make_unique<EuclideanGkb>(system.A_tilde, params.l_max + 1);
      prob.to_phi = [&system](const Vector& c) { return system.to_phi(c); };
      KrylovOutcome out;
      if (method == Method::Hybrid) {
        out = run_hybrid_lsqr(std::move(prob), params, n);
      } else if (method == Method::IterativeOptimal) {
        out = run_lsqr_optimal(std::move(prob), params);
      } else {
        out = run_lsqr(std::move(prob), method == Method::IterativeDP ? StopRule::Discrepancy : StopRule::LCurve,
                       params);
      }
      ctilde = std::move(out.coefficients);
      out.report.method = method;
      est.report = std::move(out.report);
      break;
    }
  }

  est.phi_values = system.to_phi(ctilde);
  est.coefficients = est.phi_values;
  est.report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

}  // namespace kernelop
