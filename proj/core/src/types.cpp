#include "kernelop/types.hpp"

#include <array>
#include <utility>

namespace kernelop {
namespace {

constexpr std::array<std::pair<Example, std::string_view>, 3> kExamples{{
    {Example::Integral, "integral"},
    {Example::Nonlocal, "nonlocal"},
    {Example::Aggregation, "aggregation"},
}};

constexpr std::array<std::pair<NormKind, std::string_view>, 3> kNorms{{
    {NormKind::HGbar, "HGbar"},
    {NormKind::HGauss, "HGauss"},
    {NormKind::L2rho, "L2rho"},
}};

constexpr std::array<std::pair<Method, std::string_view>, 8> kMethods{{
    {Method::TikhonovLC, "tikhonov_lc"},
    {Method::TikhonovGCV, "tikhonov_gcv"},
    {Method::IterativeLC, "iterative_lc"},
    {Method::IterativeDP, "iterative_dp"},
    {Method::Hybrid, "hybrid"},
    {Method::MinimalNorm, "minimal_norm"},
    {Method::TikhonovFixed, "tikhonov_fixed"},
    {Method::IterativeOptimal, "iterative_opt"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table, Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "unknown";
}

template <typename Enum, std::size_t N>
Enum parse(const std::array<std::pair<Enum, std::string_view>, N>& table, std::string_view name,
           std::string_view what) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

}  // namespace

std::string_view to_string(Example e) { return name_of(kExamples, e); }
std::string_view to_string(NormKind n) { return name_of(kNorms, n); }
std::string_view to_string(Method m) { return name_of(kMethods, m); }

Example parse_example(std::string_view name) { return parse(kExamples, name, "example"); }
NormKind parse_norm(std::string_view name) { return parse(kNorms, name, "norm"); }
Method parse_method(std::string_view name) { return parse(kMethods, name, "solver"); }

}  // namespace kernelop
