#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riskplan/contour.hpp"
#include "riskplan/dist.hpp"

namespace riskplan {

// Bernoulli collision estimate with binomial standard error. The ground-truth
// instrument for all soundness tests: plain sampling, no variance reduction.
struct RiskEstimate {
  double p_hat = 0.0;
  long n = 0;
  double se = 0.0;  // sqrt(p_hat (1 - p_hat) / n)
  uint64_t seed = 0;
};

// Fraction of omega draws with body(x, w [, t]) >= 0. Deterministic given the
// seed and independent of the worker count (fixed-size chunk substreams).
RiskEstimate mc_point_risk(const std::vector<double>& x, const Obstacle& obs,
                           const std::vector<DistributionSpec>& dists, std::optional<double> t,
                           long n, uint64_t seed);

struct ObstacleRisk {
  std::string name;
  RiskEstimate max_risk;
  double argmax_t = 0.0;
};

struct TrajectoryRiskReport {
  std::vector<ObstacleRisk> per_obstacle;
  long n_omega = 0;
  int n_t = 0;
  // Discretized validation, not a certificate.
  std::string note = "discretized validation, not a certificate";

  double max_risk() const;
};

// Max point risk over a uniform time grid (n_t points including endpoints).
TrajectoryRiskReport mc_trajectory_risk(const std::function<std::vector<double>(double)>& position,
                                        double t0, double tf,
                                        const std::vector<Obstacle>& obstacles,
                                        const std::vector<DistributionSpec>& dists, long n_omega,
                                        int n_t, uint64_t seed);

struct TubeRiskReport {
  std::vector<ObstacleRisk> per_obstacle;  // max over sampled tube points
  // Fraction of omega draws for which at least one sampled tube point collides;
  // approximates the slice-intersection event of the tube chance constraint.
  double max_intersection_risk = 0.0;
  double intersection_argmax_t = 0.0;
  long n_omega = 0;
  int n_t = 0;
  int n_x = 0;
  std::string note =
      "point-risk max lower-bounds the intersection risk; sampled intersection approximates it";

  double max_point_risk() const;
};

// Per time sample, draws n_x points uniformly in the tube slice (rejection
// sampling in the ball) and reports the worst point risk and the sampled
// slice-intersection risk.
TubeRiskReport mc_tube_risk(const std::function<std::vector<double>(double)>& center,
                            const std::function<double(double)>& radius, double t0, double tf,
                            const std::vector<Obstacle>& obstacles,
                            const std::vector<DistributionSpec>& dists, long n_omega, int n_t,
                            int n_x, uint64_t seed);

}  // namespace riskplan
