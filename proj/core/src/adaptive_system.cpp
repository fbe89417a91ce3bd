#include "kernelop/adaptive_system.hpp"

#include <ostream>
#include <stdexcept>

namespace kernelop {

namespace {
constexpr double kRoundingMassRel = 1e-12;
}  // namespace

Vector build_exploration_measure(const Matrix& g, double ds) {
  if (!(ds > 0.0)) throw std::invalid_argument("build_exploration_measure: ds must be positive");
  Vector rho = g.cwiseAbs().colwise().sum().transpose();
  // Columns that vanish analytically (e.g. s = 1 under periodic inputs) come out at rounding
  // level; they carry no information and would only make the L2 baseline ill-posed.
  const double floor = kRoundingMassRel * rho.maxCoeff();
  for (Index l = 0; l < rho.size(); ++l) {
    if (rho(l) <= floor) rho(l) = 0.0;
  }
  const double total = rho.sum() * ds;
  if (!(total > 0.0)) throw DegenerateDataError("degenerate data: exploration measure undefined");
  return rho / total;
}

AdaptiveSystem assemble(const Matrix& g, const Vector& f, double ds) {
  if (g.rows() != f.size()) throw std::invalid_argument("assemble: g has " + std::to_string(g.rows()) +
                                                        " rows but f has " + std::to_string(f.size()));
  AdaptiveSystem sys;
  sys.norm = NormKind::HGbar;
  sys.ds = ds;
  sys.f = f;
  sys.rho = build_exploration_measure(g, ds);

  const Index ns = g.cols();
  const double n = static_cast<double>(g.rows());
  sys.G.setZero(ns, ns);
  sys.G.selfadjointView<Eigen::Lower>().rankUpdate(g.transpose(), 1.0 / n);
  sys.G = sys.G.selfadjointView<Eigen::Lower>();

  sys.Gbar.setZero(ns, ns);
  for (Index b = 0; b < ns; ++b) {
    for (Index a = 0; a < ns; ++a) {
      const double w = sys.rho(a) * sys.rho(b);
      if (w > 0.0) sys.Gbar(a, b) = sys.G(a, b) / w;
    }
  }

  sys.xi.noalias() = g * sys.Gbar * ds;
  sys.sigma.resize(g.rows(), g.rows());
  sys.sigma.noalias() = g * sys.xi.transpose() * ds;
  symmetrize(sys.sigma);
  return sys;
}

void symmetrize(Matrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = j + 1; i < a.rows(); ++i) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }
}

Vector eval_estimate(const BasisSystem& system, const Vector& coefficients) {
  if (coefficients.size() != system.xi.rows()) throw std::invalid_argument("eval_estimate: dimension mismatch");
  return system.xi.transpose() * coefficients;
}

void write_spectrum_csv(std::ostream& out, const Vector& eigenvalues) {
  out << "index,eigenvalue\n";
  out.precision(17);
  for (Index i = 0; i < eigenvalues.size(); ++i) out << (i + 1) << ',' << eigenvalues(i) << '\n';
}

}  // namespace kernelop
