#include "kernelop/report.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace kernelop {

bool SolverReport::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void SolverReport::add_flag(std::string flag) {
  if (!has_flag(flag)) flags.push_back(std::move(flag));
}

std::string to_json(const SolverReport& report, int indent) {
  nlohmann::json j;
  j["method"] = std::string(to_string(report.method));
  j["lambda"] = report.lambda ? nlohmann::json(*report.lambda) : nlohmann::json(nullptr);
  j["stop_iteration"] = report.stop_iteration ? nlohmann::json(*report.stop_iteration) : nlohmann::json(nullptr);
  j["residual_history"] = report.residual_history;
  j["solution_norm_history"] = report.solution_norm_history;
  j["wall_time_seconds"] = report.wall_time_seconds;
  j["flags"] = report.flags;
  return j.dump(indent);
}

SolverReport report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SolverReport r;
  r.method = parse_method(j.at("method").get<std::string>());
  if (!j.at("lambda").is_null()) r.lambda = j.at("lambda").get<double>();
  if (!j.at("stop_iteration").is_null()) r.stop_iteration = j.at("stop_iteration").get<int>();
  r.residual_history = j.at("residual_history").get<std::vector<double>>();
  r.solution_norm_history = j.at("solution_norm_history").get<std::vector<double>>();
  r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  if (j.contains("flags")) r.flags = j.at("flags").get<std::vector<std::string>>();
  return r;
}

}  // namespace kernelop
