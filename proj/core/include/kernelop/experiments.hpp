#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "kernelop/grids.hpp"
#include "kernelop/metrics.hpp"
#include "kernelop/report.hpp"

namespace kernelop {

enum class ExperimentKind { Accuracy, NoiseConvergence, Scalability, SingleSolve };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

/// Mirrors the JSON config keys one-to-one.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Accuracy;
  std::vector<Example> examples{Example::Integral, Example::Nonlocal, Example::Aggregation};
  std::vector<NormKind> norms{NormKind::HGbar, NormKind::HGauss, NormKind::L2rho};
  std::vector<Method> solvers{Method::TikhonovLC, Method::TikhonovGCV, Method::IterativeLC, Method::Hybrid};
  int J = 200;
  int n_s = 200;
  int n0 = 30;
  std::vector<double> nsr{0.1};
  int n_sims = 50;
  int l_max = 50;
  std::vector<int> l_max_schedule{30, 30, 40, 40, 50, 50};
  std::vector<int> n0_grid{6, 12, 18, 24, 30, 36};
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";
  double sigma0 = 0.1;
  int n_modes = 10;
  int lc_window = 10;
  double dp_tau = 1.01;
  double rank_tol = 1e-14;
  int lambda_grid = 200;
  double lambda = 0.0;  // tikhonov_fixed
  int sim_index = 0;    // single_solve
};

/// Parses JSON text. Missing keys take the experiment's defaults; unknown keys, wrong types and
/// inconsistent values raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Seed of simulation `sim`.
inline std::uint64_t simulation_seed(const ExperimentConfig& config, int sim) {
  return config.base_seed + static_cast<std::uint64_t>(sim);
}

SolverParams solver_params(const ExperimentConfig& config, const Dataset& data, int l_max);

/// One dataset per (example, simulation) named <example>_sim<index>.kop; returns the paths.
std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& config,
                                                const std::filesystem::path& out_dir, int jobs = 1);

/// Runs every (norm, solver) pair on one dataset. Assembly time is added to each solve time and
/// an eigendecomposition shared by the Tikhonov rules is charged to each of them.
/// When phi_out is given it receives one phi per returned row.
std::vector<RunSummary> run_dataset(const Dataset& data, const ExperimentConfig& config,
                                    const std::vector<NormKind>& norms, const std::vector<Method>& solvers,
                                    int l_max, std::vector<Vector>* phi_out = nullptr);

struct ExperimentOutput {
  std::vector<RunSummary> runs;
  std::vector<std::filesystem::path> files;
};

/// Writes runs.csv and summary.csv (accuracy, noise_convergence, scalability; accuracy also
/// estimators.csv for simulation 0) or estimate.csv and report.json (single_solve) to out_dir.
/// Rows are ordered independently of `jobs`; on failure the completed rows are still written.
ExperimentOutput cmd_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                int jobs = 1);

/// Solves config's first (example, norm, solver, nsr) for simulation config.sim_index.
ExperimentOutput cmd_solve(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Runs tasks 0..count-1 on `jobs` threads; exceptions are rethrown after all workers stop.
void parallel_for(int count, int jobs, const std::function<void(int)>& task);

}  // namespace kernelop
