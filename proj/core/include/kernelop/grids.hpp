#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kernelop/types.hpp"

namespace kernelop {

/// Uniform meshes shared by every module.
///
/// x_j = j/J (j = 1..J) on (0, 1]; y_i = -1 + i/J (i = 0..3J) covers [-1, 2] including both
/// endpoints; s_l = l/n_s (l = 1..n_s) are the right endpoints of the cells I_l = (s_{l-1}, s_l].
/// Vectors are stored 0-based, so x(0) = 1/J and s(0) = 1/n_s.
struct Grids {
  int J = 0;
  int ns = 0;
  double dx = 0.0;
  double ds = 0.0;
  Vector x;
  Vector y;
  Vector s;

  /// Number of x-steps per s-step; x_j +- s_l is always a y-node.
  int stride() const noexcept { return J / ns; }

  /// y-grid index of x_j + sign * s_l (0-based j and l, sign = +1 or -1).
  Index y_index(Index j, Index l, int sign) const noexcept {
    return (j + 1) + sign * (l + 1) * stride() + J;
  }

  /// y-grid index of x_j.
  Index y_index(Index j) const noexcept { return j + 1 + J; }
};

/// Builds the meshes. Requires J >= 2, 1 <= ns <= J and J divisible by ns.
Grids build_grids(int J, int ns);

/// One random input function u_k, kept both as its cosine series and as values on the y-grid.
///
/// u(y) = sum_n coefficients(n) cos(2 pi n y), n = 0..n_u. For Nonlocal inputs the series is
/// multiplied by the indicator of [cutoff_low, cutoff_high].
struct InputSample {
  static constexpr double cutoff_low = -0.5;
  static constexpr double cutoff_high = 0.8;

  Example example = Example::Integral;
  Vector coefficients;
  Vector values;
  Vector derivative_values;  // Aggregation only; empty otherwise
  bool cutoff_applied = false;

  double value_at(double y) const;
  double derivative_at(double y) const;
};

/// sigma_n = n^{-2}.
double inverse_square_decay(int n);

struct SamplingOptions {
  int n_modes = 10;
  std::function<double(int)> decay = inverse_square_decay;
  /// Aggregation amplitudes are rescaled so that sum_n n sigma_n equals this value (< 1).
  double aggregation_budget = 0.9;
};

/// Builds an input from explicit cosine coefficients (index = mode number, entry 0 is the mean).
InputSample make_input(Example example, const Grids& grids, Vector coefficients);

/// Draws a random input for the given example:
///   Integral/Nonlocal: coefficients X_n ~ N(0, 4 sigma_n^2), n = 1..n_u (Nonlocal then cut off);
///   Aggregation: u = 1 + sum_n sigma_n zeta_n cos(2 pi n y) with random signs zeta_n.
InputSample sample_input(Example example, const Grids& grids, const SamplingOptions& options,
                         std::mt19937_64& rng);

/// Aggregation amplitudes sigma_n after rescaling to the positivity budget.
std::vector<double> aggregation_amplitudes(const SamplingOptions& options);

/// A true kernel on [0, 1] together with the points where it jumps.
struct Kernel {
  std::string name;
  std::function<double(double)> fn;
  std::vector<double> breakpoints;

  double operator()(double s) const { return fn(s); }
};

/// Built-in truth for each example: sin(2 pi s), sin(4 pi s) 1_[0,0.8](s), -2 sin^3(6 pi s).
Kernel true_kernel(Example example);

/// Generated observations. Row (k, j) of g and entry (k, j) of f live at index k * J + j.
struct Dataset {
  Example example = Example::Integral;
  Grids grids;
  int n0 = 0;
  Matrix g;
  Vector f;
  Vector f_clean;
  Vector noise;
  double sigma = 0.0;
  double nsr = 0.0;
  std::uint64_t seed = 0;

  Index rows() const noexcept { return static_cast<Index>(n0) * grids.J; }
  Index row(int k, int j) const noexcept { return static_cast<Index>(k) * grids.J + j; }
};

struct GenerationOptions {
  SamplingOptions sampling;
  int quadrature_nodes = 5;  // Gauss-Legendre nodes per s-cell
  /// Replaces the random input draw (used for deterministic fixtures).
  std::function<InputSample(const Grids&, std::mt19937_64&)> input_sampler;
};

/// Signal strength (1/n0) sum_k ||f_k||_{L2_nu} with nu({x_j}) = 1/J.
double signal_strength(const Vector& f_clean, int n0, int J);

/// Generates n0 inputs, their g-arrays on the s-nodes, Gauss-Legendre outputs and noise with
/// per-entry variance sigma^2/dx, where sigma = nsr * S * sqrt(dx) and S is the signal strength.
Dataset generate_dataset(Example example, const Kernel& truth, int J, int ns, int n0, double nsr,
                         std::uint64_t seed, const GenerationOptions& options = {});

/// Composite Gauss-Legendre approximation of the clean output integral at (u, x); each s-cell is
/// split at the kernel's breakpoints and at the input's jump locations.
double quadrature_output(Example example, const InputSample& u, const Kernel& truth, double x,
                         const Grids& grids, int nodes_per_cell);

}  // namespace kernelop
