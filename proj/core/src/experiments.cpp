#include "kernelop/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "kernelop/adaptive_system.hpp"
#include "kernelop/baselines.hpp"
#include "kernelop/dataset_io.hpp"
#include "kernelop/linalg.hpp"
#include "kernelop/solve.hpp"

namespace kernelop {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr std::pair<ExperimentKind, std::string_view> kKinds[] = {
    {ExperimentKind::Accuracy, "accuracy"},
    {ExperimentKind::NoiseConvergence, "noise_convergence"},
    {ExperimentKind::Scalability, "scalability"},
    {ExperimentKind::SingleSolve, "single_solve"},
};

const std::set<std::string> kKnownKeys{
    "experiment", "examples", "norms",  "solvers",     "J",         "n_s",      "n0",        "nsr",
    "n_sims",     "l_max",    "l_max_schedule", "n0_grid", "base_seed", "output_dir", "sigma0", "n_modes",
    "lc_window",  "dp_tau",   "rank_tol", "lambda_grid", "lambda", "sim_index"};

template <typename T, typename Parse>
std::vector<T> parse_names(const json& j, const char* key, Parse parse) {
  std::vector<T> out;
  for (const auto& item : j.at(key)) {
    try {
      out.push_back(parse(item.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(key) + ": " + e.what());
    }
  }
  return out;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(!c.examples.empty(), "examples must be nonempty");
  require(!c.norms.empty(), "norms must be nonempty");
  require(!c.solvers.empty(), "solvers must be nonempty");
  require(!c.nsr.empty(), "nsr must be nonempty");
  require(c.J >= 2, "J must be >= 2");
  require(c.n_s >= 1 && c.n_s <= c.J && c.J % c.n_s == 0, "n_s must divide J");
  require(c.n0 >= 1, "n0 must be >= 1");
  require(c.n_sims >= 1, "n_sims must be >= 1");
  require(c.l_max >= 1, "l_max must be >= 1");
  require(c.n_modes >= 1, "n_modes must be >= 1");
  require(c.lc_window >= 1, "lc_window must be >= 1");
  require(c.dp_tau > 0.0, "dp_tau must be positive");
  require(c.rank_tol >= 0.0, "rank_tol must be >= 0");
  require(c.lambda_grid >= 3, "lambda_grid must be >= 3");
  require(c.lambda >= 0.0, "lambda must be >= 0");
  require(c.sigma0 > 0.0, "sigma0 must be positive");
  require(c.sim_index >= 0, "sim_index must be >= 0");
  for (double v : c.nsr) require(v >= 0.0, "nsr entries must be >= 0");
  require(!c.n0_grid.empty(), "n0_grid must be nonempty");
  require(c.n0_grid.size() == c.l_max_schedule.size(), "l_max_schedule must have one entry per n0_grid value");
  for (int v : c.n0_grid) require(v >= 1, "n0_grid entries must be >= 1");
  for (int v : c.l_max_schedule) require(v >= 1, "l_max_schedule entries must be >= 1");
}

struct Task {
  Example example;
  double nsr;
  int n0;
  int l_max;
  int sim;
};

std::vector<Task> make_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  for (Example e : c.examples) {
    if (c.experiment == ExperimentKind::Scalability) {
      for (std::size_t i = 0; i < c.n0_grid.size(); ++i) {
        for (int s = 0; s < c.n_sims; ++s) tasks.push_back({e, c.nsr.front(), c.n0_grid[i], c.l_max_schedule[i], s});
      }
    } else {
      for (double nsr : c.nsr) {
        for (int s = 0; s < c.n_sims; ++s) tasks.push_back({e, nsr, c.n0, c.l_max, s});
      }
    }
  }
  return tasks;
}

Dataset make_dataset(const ExperimentConfig& c, Example e, double nsr, int n0, int sim) {
  GenerationOptions options;
  options.sampling.n_modes = c.n_modes;
  return generate_dataset(e, true_kernel(e), c.J, c.n_s, n0, nsr, simulation_seed(c, sim), options);
}

void write_runs(const fs::path& path, const std::vector<RunSummary>& runs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_run_csv_header(out);
  for (const RunSummary& r : runs) write_run_csv_row(out, r);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig c;
  try {
    if (j.contains("experiment")) c.experiment = parse_experiment(j.at("experiment").get<std::string>());
    switch (c.experiment) {
      case ExperimentKind::NoiseConvergence:
        c.examples = {Example::Integral};
        c.norms = {NormKind::HGbar};
        c.solvers = {Method::TikhonovLC, Method::IterativeLC, Method::Hybrid};
        c.nsr = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
        break;
      case ExperimentKind::Scalability:
        c.examples = {Example::Integral};
        c.norms = {NormKind::HGbar};
        c.solvers = {Method::TikhonovLC, Method::IterativeLC, Method::Hybrid};
        c.n_sims = 3;
        break;
      case ExperimentKind::SingleSolve:
        c.examples = {Example::Integral};
        c.norms = {NormKind::HGbar};
        c.solvers = {Method::TikhonovLC};
        break;
      case ExperimentKind::Accuracy:
        break;
    }
    if (j.contains("examples")) c.examples = parse_names<Example>(j, "examples", parse_example);
    if (j.contains("norms")) c.norms = parse_names<NormKind>(j, "norms", parse_norm);
    if (j.contains("solvers")) c.solvers = parse_names<Method>(j, "solvers", parse_method);
    if (j.contains("J")) c.J = j.at("J").get<int>();
    c.n_s = j.contains("n_s") ? j.at("n_s").get<int>() : c.J;
    if (j.contains("n0")) c.n0 = j.at("n0").get<int>();
    if (j.contains("nsr")) {
      c.nsr = j.at("nsr").is_array() ? j.at("nsr").get<std::vector<double>>()
                                     : std::vector<double>{j.at("nsr").get<double>()};
    }
    if (j.contains("n_sims")) c.n_sims = j.at("n_sims").get<int>();
    if (j.contains("l_max")) c.l_max = j.at("l_max").get<int>();
    if (j.contains("l_max_schedule")) c.l_max_schedule = j.at("l_max_schedule").get<std::vector<int>>();
    if (j.contains("n0_grid")) c.n0_grid = j.at("n0_grid").get<std::vector<int>>();
    if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("sigma0")) c.sigma0 = j.at("sigma0").get<double>();
    if (j.contains("n_modes")) c.n_modes = j.at("n_modes").get<int>();
    if (j.contains("lc_window")) c.lc_window = j.at("lc_window").get<int>();
    if (j.contains("dp_tau")) c.dp_tau = j.at("dp_tau").get<double>();
    if (j.contains("rank_tol")) c.rank_tol = j.at("rank_tol").get<double>();
    if (j.contains("lambda_grid")) c.lambda_grid = j.at("lambda_grid").get<int>();
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("sim_index")) c.sim_index = j.at("sim_index").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a field of the wrong type: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SolverParams solver_params(const ExperimentConfig& config, const Dataset& data, int l_max) {
  SolverParams p;
  p.lambda = config.lambda;
  p.rank_tol = config.rank_tol;
  p.lambda_grid = config.lambda_grid;
  p.l_max = l_max;
  p.lc_window = config.lc_window;
  p.dp_tau = config.dp_tau;
  // expected ||epsilon||_2 for N entries of standard deviation sigma / sqrt(dx)
  p.noise_norm = std::sqrt(static_cast<double>(data.rows())) * data.sigma / std::sqrt(data.grids.dx);
  Vector truth(data.grids.ns);
  const Kernel kernel = true_kernel(data.example);
  for (Index l = 0; l < truth.size(); ++l) truth(l) = kernel(data.grids.s(l));
  const double ds = data.grids.ds;
  p.error_of = [truth, ds](const Vector& phi) { return relative_l2_error(phi, truth, ds); };
  return p;
}

std::vector<RunSummary> run_dataset(const Dataset& data, const ExperimentConfig& config,
                                    const std::vector<NormKind>& norms, const std::vector<Method>& solvers,
                                    int l_max, std::vector<Vector>* phi_out) {
  const SolverParams params = solver_params(config, data, l_max);
  const Kernel truth = true_kernel(data.example);
  bool any_direct = false;
  for (Method m : solvers) any_direct = any_direct || is_direct(m);

  std::vector<RunSummary> runs;
  auto record = [&](NormKind norm, Method m, const Estimate& est, double seconds) {
    RunSummary r;
    r.example = data.example;
    r.norm = norm;
    r.solver = m;
    r.nsr = data.nsr;
    r.n0 = data.n0;
    r.seed = data.seed;
    r.relative_error = relative_l2_error(est.phi_values, truth, data.grids);
    r.wall_time_seconds = seconds;
    if (is_direct(m) || m == Method::Hybrid) {
      r.lambda_or_stop = est.report.lambda.value_or(std::nan(""));
    } else {
      r.lambda_or_stop = est.report.stop_iteration.value_or(0);
    }
    runs.push_back(r);
    if (phi_out) phi_out->push_back(est.phi_values);
  };

  for (NormKind norm : norms) {
    if (norm == NormKind::L2rho) {
      auto t0 = Clock::now();
      const L2RhoSystem sys = assemble_l2rho(data.g, data.f, data.grids.ds);
      const double t_asm = seconds_since(t0);
      ThinSvd svd;
      double t_svd = 0.0;
      if (any_direct) {
        t0 = Clock::now();
        svd = thin_svd(sys.A_tilde);
        t_svd = seconds_since(t0);
      }
      for (Method m : solvers) {
        const Estimate est = solve_l2rho(sys, m, params, is_direct(m) ? &svd : nullptr);
        record(norm, m, est, t_asm + (is_direct(m) ? t_svd : 0.0) + est.report.wall_time_seconds);
      }
      continue;
    }

    auto t0 = Clock::now();
    std::unique_ptr<BasisSystem> sys;
    if (norm == NormKind::HGbar) {
      sys = std::make_unique<AdaptiveSystem>(assemble(data.g, data.f, data.grids.ds));
    } else {
      sys = std::make_unique<GaussianSystem>(
          assemble_gaussian(data.g, data.f, data.grids.s, data.grids.ds, config.sigma0));
    }
    const double t_asm = seconds_since(t0);
    EigenSystem eig;
    double t_eig = 0.0;
    if (any_direct) {
      t0 = Clock::now();
      eig = eigen_decompose(sys->sigma, params.rank_tol);
      t_eig = seconds_since(t0);
    }
    for (Method m : solvers) {
      const Estimate est = solve(*sys, m, params, is_direct(m) ? &eig : nullptr);
      record(norm, m, est, t_asm + (is_direct(m) ? t_eig : 0.0) + est.report.wall_time_seconds);
    }
  }
  return runs;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& task) {
  if (count <= 0) return;
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      while (!failed.load()) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<fs::path> cmd_generate(const ExperimentConfig& config, const fs::path& out_dir, int jobs) {
  ensure_dir(out_dir);
  std::vector<std::pair<Example, int>> tasks;
  for (Example e : config.examples) {
    for (int s = 0; s < config.n_sims; ++s) tasks.emplace_back(e, s);
  }
  std::vector<fs::path> paths(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
    const auto [e, s] = tasks[static_cast<std::size_t>(i)];
    const Dataset data = make_dataset(config, e, config.nsr.front(), config.n0, s);
    const fs::path path = out_dir / (std::string(to_string(e)) + "_sim" + std::to_string(s) + ".kop");
    write_dataset(path, data);
    paths[static_cast<std::size_t>(i)] = path;
  });
  return paths;
}

ExperimentOutput cmd_solve(const ExperimentConfig& config, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const Example e = config.examples.front();
  const NormKind norm = config.norms.front();
  const Method m = config.solvers.front();
  const Dataset data = make_dataset(config, e, config.nsr.front(), config.n0, config.sim_index);
  const SolverParams params = solver_params(config, data, config.l_max);

  auto t0 = Clock::now();
  Estimate est;
  if (norm == NormKind::L2rho) {
    est = solve_l2rho(assemble_l2rho(data.g, data.f, data.grids.ds), m, params);
  } else if (norm == NormKind::HGbar) {
    est = solve(assemble(data.g, data.f, data.grids.ds), m, params);
  } else {
    est = solve(assemble_gaussian(data.g, data.f, data.grids.s, data.grids.ds, config.sigma0), m, params);
  }
  const double total = seconds_since(t0);

  ExperimentOutput out;
  const Kernel truth = true_kernel(e);
  {
    const fs::path path = out_dir / "estimate.csv";
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    csv << "s,phi_hat,phi_true\n";
    csv.precision(12);
    for (Index l = 0; l < data.grids.s.size(); ++l) {
      csv << data.grids.s(l) << ',' << est.phi_values(l) << ',' << truth(data.grids.s(l)) << '\n';
    }
    out.files.push_back(path);
  }
  {
    const fs::path path = out_dir / "report.json";
    std::ofstream js(path);
    if (!js) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    js << to_json(est.report, 2) << '\n';
    out.files.push_back(path);
  }
  RunSummary r;
  r.example = e;
  r.norm = norm;
  r.solver = m;
  r.nsr = data.nsr;
  r.n0 = data.n0;
  r.seed = data.seed;
  r.relative_error = relative_l2_error(est.phi_values, truth, data.grids);
  r.wall_time_seconds = total;
  r.lambda_or_stop = (is_direct(m) || m == Method::Hybrid) ? est.report.lambda.value_or(std::nan(""))
                                                            : est.report.stop_iteration.value_or(0);
  out.runs.push_back(r);
  return out;
}

ExperimentOutput cmd_experiment(const ExperimentConfig& config, const fs::path& out_dir, int jobs) {
  if (config.experiment == ExperimentKind::SingleSolve) return cmd_solve(config, out_dir);
  ensure_dir(out_dir);

  std::vector<Method> solvers = config.solvers;
  if (config.experiment == ExperimentKind::NoiseConvergence &&
      std::find(solvers.begin(), solvers.end(), Method::IterativeOptimal) == solvers.end()) {
    solvers.push_back(Method::IterativeOptimal);
  }

  const std::vector<Task> tasks = make_tasks(config);
  std::vector<std::vector<RunSummary>> results(tasks.size());
  std::vector<std::vector<Vector>> phis(tasks.size());
  std::vector<char> done(tasks.size(), 0);
  const bool keep_phi = config.experiment == ExperimentKind::Accuracy;

  std::exception_ptr failure;
  try {
    parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
      const Task& t = tasks[static_cast<std::size_t>(i)];
      const Dataset data = make_dataset(config, t.example, t.nsr, t.n0, t.sim);
      std::vector<Vector>* phi_out = keep_phi && t.sim == 0 ? &phis[static_cast<std::size_t>(i)] : nullptr;
      results[static_cast<std::size_t>(i)] = run_dataset(data, config, config.norms, solvers, t.l_max, phi_out);
      done[static_cast<std::size_t>(i)] = 1;
    });
  } catch (...) {
    failure = std::current_exception();
  }

  ExperimentOutput out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (done[i]) out.runs.insert(out.runs.end(), results[i].begin(), results[i].end());
  }
  const fs::path runs_path = out_dir / "runs.csv";
  write_runs(runs_path, out.runs);
  out.files.push_back(runs_path);
  if (failure) std::rethrow_exception(failure);

  const fs::path summary_path = out_dir / "summary.csv";
  {
    std::ofstream s(summary_path);
    if (!s) throw std::runtime_error("cannot open '" + summary_path.string() + "' for writing");
    write_summary_csv(s, summarize(out.runs));
  }
  out.files.push_back(summary_path);

  if (keep_phi) {
    const fs::path est_path = out_dir / "estimators.csv";
    std::ofstream s(est_path);
    if (!s) throw std::runtime_error("cannot open '" + est_path.string() + "' for writing");
    s << "example,norm,solver,nsr,s,phi_hat,phi_true\n";
    s.precision(12);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (phis[i].empty()) continue;
      const Kernel truth = true_kernel(tasks[i].example);
      const Grids grids = build_grids(config.J, config.n_s);
      for (std::size_t r = 0; r < phis[i].size(); ++r) {
        const RunSummary& run = results[i][r];
        for (Index l = 0; l < grids.s.size(); ++l) {
          s << to_string(run.example) << ',' << to_string(run.norm) << ',' << to_string(run.solver) << ','
            << run.nsr << ',' << grids.s(l) << ',' << phis[i][r](l) << ',' << truth(grids.s(l)) << '\n';
        }
      }
    }
    out.files.push_back(est_path);
  }
  return out;
}

}  // namespace kernelop
