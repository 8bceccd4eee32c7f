#pragma once

#include <functional>
#include <string>
#include <vector>

#include "riskplan/cert.hpp"
#include "riskplan/contour.hpp"
#include "riskplan/trajectory.hpp"

namespace riskplan {

struct PlanConfig {
  int max_iterations = 5000;
  double step_frac = 0.05;  // steering step as a fraction of the workspace diagonal
  double goal_bias = 0.05;
  uint64_t seed = 1;
  bool init_line = false;  // sample around the straight line, growing the neighborhood
  int pieces = 2;          // linear pieces s for the layered (dynamic) planners
  VerifyOptions verify;
};

struct PlanRequest {
  FreeSpace free;
  std::vector<Obstacle> obstacles;      // raw bodies, for the Monte Carlo baseline
  std::vector<DistributionSpec> dists;  // one per declared uncertain variable
  Universe universe;
  std::vector<double> start, goal;
  double t0 = 0.0, tf = 1.0;
  double delta = 0.1;
  PlanConfig config;
};

struct SearchTree {
  struct Node {
    std::vector<double> point;
    int parent = -1;
    int layer = 0;  // time-interval index reached (dynamic planner)
  };
  struct Edge {
    int from = -1, to = -1;
    double check_seconds = 0.0;
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

enum class PlanStatus { Found, NoPathFound };

struct PlanResult {
  PlanStatus status = PlanStatus::NoPathFound;
  std::string failure_reason;
  PiecewiseLinearTrajectory trajectory;
  SearchTree tree;
  std::vector<VerifyReport> piece_reports;  // final certificates, one per piece
  int iterations_used = 0;
  long edge_checks = 0;
  double edge_check_seconds = 0.0;  // cumulative acceptance-test time
  double plan_time_s = 0.0;

  bool found() const { return status == PlanStatus::Found; }
  double mean_edge_check_seconds() const {
    return edge_checks > 0 ? edge_check_seconds / edge_checks : 0.0;
  }
};

// Edge acceptance test for the RRT core: segment from->to over [ta, tb].
using EdgeCheck = std::function<bool(const std::vector<double>& from,
                                     const std::vector<double>& to, double ta, double tb)>;

// RRT with SOS-certified edges against static contours. Every piece of the
// returned trajectory carries a Verified report.
PlanResult rrt_sos_static(const PlanRequest& req);

// Layered RRT for dynamic contours: piece i is certified on its own uniform
// time interval, and the last layer additionally certifies the edge to the
// goal on the final interval. s is the number of linear pieces.
PlanResult rrt_sos_dynamic(const PlanRequest& req, int s);

// Roadmap-improvement: connects every certified vertex pair of the tree and
// returns the Dijkstra-shortest path, never longer (in the integral-squared-
// speed objective) than the tree's own path.
PiecewiseLinearTrajectory shortcut(const SearchTree& tree, const FreeSpace& free,
                                   const PlanRequest& req,
                                   const PiecewiseLinearTrajectory& original);

// Sampling baseline: edges accepted when the empirical risk at discretized
// waypoints stays within delta over a handful of uncertainty samples. No
// continuous-time guarantee; kept for comparison runs.
PlanResult mc_rrt_baseline(const PlanRequest& req, int n_samples, int n_waypoints);

// Shared RRT growth used by the planners and the tube planner.
PlanResult grow_rrt(const PlanRequest& req, const EdgeCheck& check, int s_layers);

}  // namespace riskplan
