#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace kernelop {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// The three operator families from which kernels are learned.
enum class Example { Integral, Nonlocal, Aggregation };

/// Regularization norm: data-adaptive RKHS, Gaussian-kernel RKHS, weighted L2.
enum class NormKind { HGbar, HGauss, L2rho };

/// Estimator / parameter-choice rule that produced an estimate.
enum class Method {
  TikhonovLC,
  TikhonovGCV,
  IterativeLC,
  IterativeDP,
  Hybrid,
  MinimalNorm,
  TikhonovFixed,
  IterativeOptimal,
};

std::string_view to_string(Example e);
std::string_view to_string(NormKind n);
std::string_view to_string(Method m);

// Parsers accept the names produced by to_string; they throw std::invalid_argument otherwise.
Example parse_example(std::string_view name);
NormKind parse_norm(std::string_view name);
Method parse_method(std::string_view name);

/// Raised when the data carry no information (e.g. an all-zero g array).
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kernelop
