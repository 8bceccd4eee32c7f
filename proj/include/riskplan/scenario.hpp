#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riskplan/contour.hpp"
#include "riskplan/plan.hpp"
#include "riskplan/tube.hpp"

namespace riskplan {

inline constexpr int kSchemaVersion = 1;

struct OracleSettings {
  long n_omega = 100000;
  int n_t = 1000;
  int n_x = 1000;
};

// Full problem description as loaded from a scenario JSON file.
struct Scenario {
  std::string name;
  std::string path;
  uint64_t content_hash = 0;

  int state_dim = 2;
  Box workspace;
  std::vector<std::string> omega_names;  // "w1", "w2", ... in declaration order
  std::vector<DistributionSpec> dists;
  std::vector<Obstacle> obstacles;
  double delta = 0.1;
  std::vector<double> start, goal;
  double t0 = 0.0, tf = 1.0;
  uint64_t seed = 1;

  PlanConfig planner;
  TubeSearchConfig tube;
  OracleSettings oracle;

  Universe universe() const { return {state_dim, static_cast<int>(dists.size()), true}; }
  bool has_dynamic() const;

  // Moment table at the orders the obstacles require (2 * per-variable degree).
  MomentTable moments() const;
  FreeSpace free_space(double delta_override) const;
  FreeSpace free_space() const { return free_space(delta); }
  PlanRequest plan_request() const;
  PlanRequest plan_request(const FreeSpace& fs) const;
};

Scenario load_scenario(const std::string& file_path);
Scenario scenario_from_json(const nlohmann::json& j, const std::string& source_name);

uint64_t fnv1a64(const std::string& bytes);

}  // namespace riskplan
