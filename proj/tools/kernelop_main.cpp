#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kernelop/experiments.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernelop: learn convolution kernels with data-adaptive RKHS regularization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON experiment config")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
    cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  CLI::App* generate = app.add_subcommand("generate", "write one dataset file per (example, simulation)");
  CLI::App* solve = app.add_subcommand("solve", "solve one dataset and write estimate.csv + report.json");
  CLI::App* experiment = app.add_subcommand("experiment", "run an experiment and write CSV artifacts");
  add_common(generate);
  add_common(solve);
  add_common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  kernelop::ExperimentConfig config;
  try {
    config = kernelop::load_config(config_path);
  } catch (const kernelop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::filesystem::path out = out_dir.empty() ? std::filesystem::path(config.output_dir) : std::filesystem::path(out_dir);

  try {
    if (generate->parsed()) {
      const auto paths = kernelop::cmd_generate(config, out, jobs);
      std::cout << "wrote " << paths.size() << " dataset(s) to " << out.string() << '\n';
    } else if (solve->parsed()) {
      const auto result = kernelop::cmd_solve(config, out);
      const auto& r = result.runs.front();
      std::cout << kernelop::to_string(r.norm) << '/' << kernelop::to_string(r.solver)
                << " rel_error=" << r.relative_error << " time_s=" << r.wall_time_seconds << '\n';
      for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    } else {
      const auto result = kernelop::cmd_experiment(config, out, jobs);
      std::cout << kernelop::to_string(config.experiment) << ": " << result.runs.size() << " run(s)\n";
      for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    }
  } catch (const kernelop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
