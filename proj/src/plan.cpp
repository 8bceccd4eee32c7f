#include "riskplan/plan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

#include "riskplan/parallel.hpp"
#include "riskplan/rng.hpp"

namespace riskplan {

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  return std::sqrt(dist2(a, b));
}

std::vector<double> lerp(const std::vector<double>& a, const std::vector<double>& b, double u) {
  std::vector<double> p(a.size());
  for (size_t k = 0; k < a.size(); ++k) p[k] = a[k] + (b[k] - a[k]) * u;
  return p;
}

struct TimedCheck {
  const EdgeCheck& inner;
  long& count;
  double& seconds;

  bool operator()(const std::vector<double>& a, const std::vector<double>& b, double ta,
                  double tb) const {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = inner(a, b, ta, tb);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++count;
    return ok;
  }
};

std::vector<std::vector<double>> path_to_root(const SearchTree& tree, int leaf) {
  std::vector<std::vector<double>> rev;
  for (int i = leaf; i != -1; i = tree.nodes[i].parent) rev.push_back(tree.nodes[i].point);
  std::reverse(rev.begin(), rev.end());
  return rev;
}

// Membership preconditions: start at t0, goal at tf (static contours ignore t).
bool endpoints_admissible(const PlanRequest& req, std::string* why) {
  if (!req.free.contains(req.start, req.t0)) {
    *why = "start point violates a risk contour or the workspace";
    return false;
  }
  if (!req.free.contains(req.goal, req.tf)) {
    *why = "goal point violates a risk contour or the workspace";
    return false;
  }
  return true;
}

}  // namespace

PlanResult grow_rrt(const PlanRequest& req, const EdgeCheck& raw_check, int s_layers) {
  const auto t_start = std::chrono::steady_clock::now();
  PlanResult result;
  auto finish = [&](PlanResult r) {
    r.plan_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return r;
  };
  TimedCheck check{raw_check, result.edge_checks, result.edge_check_seconds};

  std::string why;
  if (!endpoints_admissible(req, &why)) {
    result.failure_reason = why;
    return finish(result);
  }
  const int dim = req.free.workspace.dim();
  const int s = std::max(1, s_layers);
  const double horizon = req.tf - req.t0;
  auto knot = [&](int i) { return req.t0 + horizon * i / s; };

  result.tree.nodes.push_back({req.start, -1, 0});

  auto complete = [&](int leaf_index, int pieces_hint) -> PlanResult {
    result.tree.nodes.push_back({req.goal, leaf_index, pieces_hint});
    result.tree.edges.push_back({leaf_index, static_cast<int>(result.tree.nodes.size()) - 1, 0.0});
    auto pts = path_to_root(result.tree, static_cast<int>(result.tree.nodes.size()) - 1);
    result.trajectory = PiecewiseLinearTrajectory::from_waypoints(pts, req.t0, req.tf);
    result.status = PlanStatus::Found;
    return finish(result);
  };

  // Layered growth fixes the piece count; free growth (s == 1 with sampling)
  // is the static planner's single tree.
  const bool layered = s > 1;

  // Immediate goal test: straight line on the full horizon.
  if (!layered) {
    if (check(req.start, req.goal, req.t0, req.tf)) return complete(0, 1);
  } else if (s == 1) {
    result.failure_reason = "straight line not certified and s = 1 admits no detours";
    return finish(result);
  }

  Rng rng(req.config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Box& box = req.free.workspace;
  const double step = std::max(1e-9, req.config.step_frac * box.diagonal());

  std::vector<std::vector<int>> layer_nodes(s + 1);
  layer_nodes[0].push_back(0);

  auto sample_point = [&](int it) {
    std::vector<double> p(dim);
    if (req.config.init_line) {
      // Neighborhood of the straight line, growing every 100 iterations.
      double u = unit(rng);
      double radius = step * (1.0 + 0.5 * (it / 100));
      for (int k = 0; k < dim; ++k) {
        double base = req.start[k] + (req.goal[k] - req.start[k]) * u;
        p[k] = std::clamp(base + (2 * unit(rng) - 1) * radius, box.lo[k], box.hi[k]);
      }
      return p;
    }
    for (int k = 0; k < dim; ++k) p[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * unit(rng);
    return p;
  };

  for (int it = 1; it <= req.config.max_iterations; ++it) {
    result.iterations_used = it;
    int layer = layered ? 1 + static_cast<int>(unit(rng) * (s - 1)) : 1;
    if (layered) layer = std::min(layer, s - 1);
    bool to_goal = unit(rng) < req.config.goal_bias;
    std::vector<double> sample = to_goal ? req.goal : sample_point(it);

    // Nearest vertex; layered growth only extends from the previous layer.
    const auto& candidates = layered ? layer_nodes[layer - 1] : layer_nodes[0];
    if (candidates.empty()) continue;
    int nearest = candidates[0];
    double best = dist2(result.tree.nodes[nearest].point, sample);
    for (int idx : candidates) {
      double d = dist2(result.tree.nodes[idx].point, sample);
      if (d < best) {
        best = d;
        nearest = idx;
      }
    }
    const auto& from = result.tree.nodes[nearest].point;
    double d = std::sqrt(best);
    if (d < 1e-12) continue;
    std::vector<double> to = d <= step ? sample : lerp(from, sample, step / d);
    if (!box.contains(to)) continue;

    double ta = layered ? knot(layer - 1) : req.t0;
    double tb = layered ? knot(layer) : req.tf;
    if (!check(from, to, ta, tb)) continue;

    int new_index = static_cast<int>(result.tree.nodes.size());
    result.tree.nodes.push_back({to, nearest, layered ? layer : 0});
    result.tree.edges.push_back({nearest, new_index, 0.0});
    if (!layered) layer_nodes[0].push_back(new_index);
    else layer_nodes[layer].push_back(new_index);

    // Goal connection: free growth tries from every new vertex; layered growth
    // only from the last tree layer, certified on the final interval.
    if (!layered) {
      if (check(to, req.goal, req.t0, req.tf)) return complete(new_index, 0);
    } else if (layer == s - 1) {
      if (check(to, req.goal, knot(s - 1), knot(s))) return complete(new_index, s);
    }
  }
  result.failure_reason = "iteration cap exhausted";
  return finish(result);
}

namespace {

// Re-verifies the final trajectory piece by piece on its actual intervals and
// attaches the certificates.
void attach_piece_reports(PlanResult& result, const PlanRequest& req) {
  if (!result.found()) return;
  const auto& traj = result.trajectory;
  for (int i = 0; i < traj.piece_count(); ++i) {
    auto polys = traj.piece_polys(i, req.universe);
    result.piece_reports.push_back(
        verify_segment(polys, traj.knot(i), traj.knot(i + 1), req.free, req.config.verify));
  }
  for (const auto& r : result.piece_reports) {
    if (!r.verified()) {
      result.status = PlanStatus::NoPathFound;
      result.failure_reason = "final piece re-verification failed";
      break;
    }
  }
}

EdgeCheck segment_check(const PlanRequest& req) {
  return [&req](const std::vector<double>& a, const std::vector<double>& b, double ta,
                double tb) {
    auto traj = PiecewiseLinearTrajectory::from_waypoints({a, b}, ta, tb);
    auto polys = traj.piece_polys(0, req.universe);
    return verify_segment(polys, ta, tb, req.free, req.config.verify).verified();
  };
}

}  // namespace

PlanResult rrt_sos_static(const PlanRequest& req) {
  for (const auto& c : req.free.contours)
    if (c.time_varying) throw ConfigError("rrt_sos_static cannot handle dynamic contours");
  PlanResult result = grow_rrt(req, segment_check(req), 1);
  attach_piece_reports(result, req);
  return result;
}

PlanResult rrt_sos_dynamic(const PlanRequest& req, int s) {
  if (s < 1) throw ConfigError("rrt_sos_dynamic needs s >= 1");
  PlanResult result = grow_rrt(req, segment_check(req), s);
  attach_piece_reports(result, req);
  return result;
}

PiecewiseLinearTrajectory shortcut(const SearchTree& tree, const FreeSpace& free,
                                   const PlanRequest& req,
                                   const PiecewiseLinearTrajectory& original) {
  const int n = static_cast<int>(tree.nodes.size());
  if (n == 0) return original;

  // Adjacency: tree edges are already certified; try every other vertex pair.
  std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
  for (const auto& e : tree.edges) ok[e.from][e.to] = ok[e.to][e.from] = 1;
  std::vector<std::pair<int, int>> candidates;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!ok[i][j]) candidates.push_back({i, j});

  EdgeCheck check = segment_check(req);
  std::vector<char> accepted(candidates.size(), 0);
  parallel_for(candidates.size(), [&](size_t c) {
    auto [i, j] = candidates[c];
    accepted[c] = check(tree.nodes[i].point, tree.nodes[j].point, 0.0, 1.0) ? 1 : 0;
  });
  for (size_t c = 0; c < candidates.size(); ++c)
    if (accepted[c]) ok[candidates[c].first][candidates[c].second] =
        ok[candidates[c].second][candidates[c].first] = 1;

  // Dijkstra by Euclidean length from the root (start) to the goal node.
  int goal_idx = -1;
  for (int i = 0; i < n; ++i)
    if (dist(tree.nodes[i].point, original.goal()) < 1e-12) goal_idx = i;
  if (goal_idx < 0) return original;

  std::vector<double> cost(n, std::numeric_limits<double>::infinity());
  std::vector<int> prev(n, -1);
  cost[0] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, 0});
  while (!pq.empty()) {
    auto [c, i] = pq.top();
    pq.pop();
    if (c > cost[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (!ok[i][j] || j == i) continue;
      double nc = c + dist(tree.nodes[i].point, tree.nodes[j].point);
      if (nc < cost[j] - 1e-15) {
        cost[j] = nc;
        prev[j] = i;
        pq.push({nc, j});
      }
    }
  }
  if (!std::isfinite(cost[goal_idx])) return original;

  std::vector<std::vector<double>> pts;
  for (int i = goal_idx; i != -1; i = prev[i]) pts.push_back(tree.nodes[i].point);
  std::reverse(pts.begin(), pts.end());
  if (pts.size() < 2) return original;
  auto improved = PiecewiseLinearTrajectory::from_waypoints(pts, original.t0, original.tf);
  // Shorter in the squared-speed objective, or keep the original.
  return trajectory_length(improved) <= trajectory_length(original) ? improved : original;
}

PlanResult mc_rrt_baseline(const PlanRequest& req, int n_samples, int n_waypoints) {
  if (n_samples < 1 || n_waypoints < 2)
    throw ConfigError("baseline needs n_samples >= 1 and n_waypoints >= 2");
  Rng omega_rng(derive_seed(req.config.seed, 0xba5eULL));

  EdgeCheck check = [&](const std::vector<double>& a, const std::vector<double>& b, double ta,
                        double tb) {
    // Fresh uncertainty samples per edge, shared across waypoints.
    std::vector<std::vector<double>> omega(n_samples,
                                           std::vector<double>(req.dists.size()));
    for (auto& row : omega)
      for (size_t w = 0; w < req.dists.size(); ++w) row[w] = sample(req.dists[w], omega_rng);

    for (const auto& obs : req.obstacles) {
      for (int j = 0; j < n_waypoints; ++j) {
        double u = static_cast<double>(j) / (n_waypoints - 1);
        Assignment at;
        at.state = lerp(a, b, u);
        at.time = ta + (tb - ta) * u;
        int hits = 0;
        for (const auto& row : omega) {
          at.uncertain = row;
          if (obs.body.eval(at) >= 0.0) ++hits;
        }
        if (static_cast<double>(hits) / n_samples > req.delta) return false;
      }
    }
    return true;
  };

  PlanResult result = grow_rrt(req, check, 1);
  // No certificates: the baseline provides no continuous-time guarantee.
  return result;
}

}  // namespace riskplan
