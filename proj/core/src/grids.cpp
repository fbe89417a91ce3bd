#include "kernelop/grids.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kernelop/operators.hpp"

namespace kernelop {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sums a_n cos(n t) and -sum a_n n sin(n t) with the rotation recurrence.
struct SeriesValue {
  double value;
  double derivative;  // d/dt
};

SeriesValue cosine_series(const Vector& a, double t) {
  const double c1 = std::cos(t);
  const double s1 = std::sin(t);
  double cn = 1.0;
  double sn = 0.0;
  double value = a.size() > 0 ? a(0) : 0.0;
  double derivative = 0.0;
  for (Index n = 1; n < a.size(); ++n) {
    const double c_next = cn * c1 - sn * s1;
    const double s_next = sn * c1 + cn * s1;
    cn = c_next;
    sn = s_next;
    value += a(n) * cn;
    derivative -= a(n) * static_cast<double>(n) * sn;
  }
  return {value, derivative};
}

bool inside_cutoff(double y) {
  return y >= InputSample::cutoff_low && y <= InputSample::cutoff_high;
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Newton iteration on the Legendre polynomial P_n.
GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? z : p1;
      const double pn_1 = n == 1 ? 1.0 : p0;
      dp = n * (z * pn - pn_1) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

}  // namespace

Grids build_grids(int J, int ns) {
  if (J < 2) throw std::invalid_argument("build_grids: J must be >= 2");
  if (ns < 1 || ns > J) throw std::invalid_argument("build_grids: n_s must lie in [1, J]");
  if (J % ns != 0) {
    throw std::invalid_argument("build_grids: J must be divisible by n_s (x +- s must land on y-nodes)");
  }
  Grids grids;
  grids.J = J;
  grids.ns = ns;
  grids.dx = 1.0 / J;
  grids.ds = 1.0 / ns;
  grids.x.resize(J);
  for (int j = 0; j < J; ++j) grids.x(j) = static_cast<double>(j + 1) / J;
  grids.y.resize(3 * J + 1);
  for (int i = 0; i <= 3 * J; ++i) grids.y(i) = -1.0 + static_cast<double>(i) / J;
  grids.s.resize(ns);
  for (int l = 0; l < ns; ++l) grids.s(l) = static_cast<double>(l + 1) / ns;
  return grids;
}

double InputSample::value_at(double y) const {
  if (cutoff_applied && !inside_cutoff(y)) return 0.0;
  return cosine_series(coefficients, kTwoPi * y).value;
}

double InputSample::derivative_at(double y) const {
  if (cutoff_applied && !inside_cutoff(y)) return 0.0;
  return kTwoPi * cosine_series(coefficients, kTwoPi * y).derivative;
}

double inverse_square_decay(int n) { return 1.0 / (static_cast<double>(n) * n); }

InputSample make_input(Example example, const Grids& grids, Vector coefficients) {
  InputSample u;
  u.example = example;
  u.coefficients = std::move(coefficients);
  u.cutoff_applied = example == Example::Nonlocal;
  u.values.resize(grids.y.size());
  for (Index i = 0; i < grids.y.size(); ++i) u.values(i) = u.value_at(grids.y(i));
  if (example == Example::Aggregation) {
    u.derivative_values.resize(grids.y.size());
    for (Index i = 0; i < grids.y.size(); ++i) u.derivative_values(i) = u.derivative_at(grids.y(i));
  }
  return u;
}

std::vector<double> aggregation_amplitudes(const SamplingOptions& options) {
  if (options.n_modes < 1) throw std::invalid_argument("aggregation inputs need n_u >= 1");
  if (!(options.aggregation_budget > 0.0 && options.aggregation_budget < 1.0)) {
    throw std::invalid_argument("aggregation budget must lie in (0, 1)");
  }
  std::vector<double> sigma(static_cast<std::size_t>(options.n_modes));
  double weighted = 0.0;
  for (int n = 1; n <= options.n_modes; ++n) {
    sigma[static_cast<std::size_t>(n - 1)] = options.decay(n);
    weighted += n * sigma[static_cast<std::size_t>(n - 1)];
  }
  if (!(weighted > 0.0)) throw std::invalid_argument("decay rule must be positive");
  for (double& v : sigma) v *= options.aggregation_budget / weighted;
  return sigma;
}

InputSample sample_input(Example example, const Grids& grids, const SamplingOptions& options,
                         std::mt19937_64& rng) {
  if (options.n_modes < 1) throw std::invalid_argument("sample_input: n_u must be >= 1");
  Vector a = Vector::Zero(options.n_modes + 1);
  if (example == Example::Aggregation) {
    const std::vector<double> sigma = aggregation_amplitudes(options);
    std::bernoulli_distribution sign(0.5);
    a(0) = 1.0;
    for (int n = 1; n <= options.n_modes; ++n) {
      a(n) = (sign(rng) ? 1.0 : -1.0) * sigma[static_cast<std::size_t>(n - 1)];
    }
  } else {
    for (int n = 1; n <= options.n_modes; ++n) {
      std::normal_distribution<double> normal(0.0, 2.0 * options.decay(n));
      a(n) = normal(rng);
    }
  }
  return make_input(example, grids, std::move(a));
}

Kernel true_kernel(Example example) {
  switch (example) {
    case Example::Integral:
      return {"sin(2 pi s)", [](double s) { return std::sin(kTwoPi * s); }, {}};
    case Example::Nonlocal:
      return {"sin(4 pi s) 1_[0,0.8](s)",
              [](double s) { return s <= 0.8 ? std::sin(2.0 * kTwoPi * s) : 0.0; },
              {0.8}};
    case Example::Aggregation:
      return {"-2 sin^3(6 pi s)",
              [](double s) {
                const double v = std::sin(3.0 * kTwoPi * s);
                return -2.0 * v * v * v;
              },
              {}};
  }
  throw std::invalid_argument("unknown example");
}

double signal_strength(const Vector& f_clean, int n0, int J) {
  double total = 0.0;
  for (int k = 0; k < n0; ++k) {
    total += std::sqrt(f_clean.segment(static_cast<Index>(k) * J, J).squaredNorm() / J);
  }
  return total / n0;
}

double quadrature_output(Example example, const InputSample& u, const Kernel& truth, double x,
                         const Grids& grids, int nodes_per_cell) {
  static thread_local int cached_n = 0;
  static thread_local GaussRule rule;
  if (cached_n != nodes_per_cell) {
    rule = gauss_legendre(nodes_per_cell);
    cached_n = nodes_per_cell;
  }

  std::vector<double> cuts = truth.breakpoints;
  if (u.cutoff_applied) {
    for (double edge : {InputSample::cutoff_low, InputSample::cutoff_high}) {
      cuts.push_back(edge - x);
      cuts.push_back(x - edge);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  const OperatorSpec op = OperatorSpec::for_example(example);
  double total = 0.0;
  std::vector<double> pieces;
  for (int l = 0; l < grids.ns; ++l) {
    const double lo = l * grids.ds;
    const double hi = (l + 1) * grids.ds;
    pieces.assign({lo});
    for (double c : cuts) {
      if (c > lo + 1e-14 && c < hi - 1e-14) pieces.push_back(c);
    }
    pieces.push_back(hi);
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
      const double half = 0.5 * (pieces[p + 1] - pieces[p]);
      const double mid = 0.5 * (pieces[p + 1] + pieces[p]);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = mid + half * rule.nodes[q];
        total += half * rule.weights[q] * truth(s) * eval_g_analytic(op, u, x, s);
      }
    }
  }
  return total;
}

Dataset generate_dataset(Example example, const Kernel& truth, int J, int ns, int n0, double nsr,
                         std::uint64_t seed, const GenerationOptions& options) {
  if (!(nsr >= 0.0)) throw std::invalid_argument("generate_dataset: nsr must be >= 0");
  if (n0 < 1) throw std::invalid_argument("generate_dataset: n0 must be >= 1");
  if (options.quadrature_nodes < 1) throw std::invalid_argument("generate_dataset: need >= 1 quadrature node");
  if (!truth.fn) throw std::invalid_argument("generate_dataset: true kernel is not callable");
  for (int i = 0; i <= 64; ++i) {
    if (!std::isfinite(truth(i / 64.0))) {
      throw std::invalid_argument("generate_dataset: true kernel is not finite on [0, 1]");
    }
  }

  Dataset data;
  data.example = example;
  data.grids = build_grids(J, ns);
  data.n0 = n0;
  data.nsr = nsr;
  data.seed = seed;

  std::mt19937_64 rng(seed);
  std::vector<InputSample> inputs;
  inputs.reserve(static_cast<std::size_t>(n0));
  for (int k = 0; k < n0; ++k) {
    inputs.push_back(options.input_sampler ? options.input_sampler(data.grids, rng)
                                           : sample_input(example, data.grids, options.sampling, rng));
  }

  const OperatorSpec op = OperatorSpec::for_example(example);
  data.g = g_matrix(op, inputs, data.grids);

  data.f_clean.resize(data.rows());
  for (int k = 0; k < n0; ++k) {
    for (int j = 0; j < J; ++j) {
      data.f_clean(data.row(k, j)) = quadrature_output(example, inputs[static_cast<std::size_t>(k)], truth,
                                                       data.grids.x(j), data.grids, options.quadrature_nodes);
    }
  }
  if (!data.f_clean.allFinite()) throw std::invalid_argument("generate_dataset: true kernel produced non-finite outputs");

  const double strength = signal_strength(data.f_clean, n0, J);
  data.sigma = nsr * strength * std::sqrt(data.grids.dx);
  data.noise = Vector::Zero(data.rows());
  if (data.sigma > 0.0) {
    std::normal_distribution<double> normal(0.0, data.sigma / std::sqrt(data.grids.dx));
    for (Index i = 0; i < data.noise.size(); ++i) data.noise(i) = normal(rng);
  }
  data.f = data.f_clean + data.noise;
  return data;
}

}  // namespace kernelop
