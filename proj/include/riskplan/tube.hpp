#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riskplan/plan.hpp"

namespace riskplan {

// Ball-tube radius profile over one span. Time is normalized to tau in [0,1].
//   Constant:  r = c
//   Linear:    r = a tau + c, or a (1 - tau) + c when decreasing
//   Quadratic: r = a (tau - b)^2 + c   (a > 0, 0 <= b <= 1, c >= 0)
struct RadiusProfile {
  enum class Kind { Constant, Linear, Quadratic };
  Kind kind = Kind::Constant;
  double a = 0.0;
  double b = 0.5;
  bool decreasing = false;
  double c = 0.0;

  RadiusProfile with_c(double new_c) const;
  void validate() const;
  double radius(double tau) const;
  double min_radius() const;  // over tau in [0,1]
  double max_radius() const;
  // r(tau(t))^2 as a polynomial in global time on [t1, t2].
  Polynomial r2_poly(const Universe& u, double t1, double t2) const;

  static RadiusProfile constant(double c) { return {Kind::Constant, 0, 0, false, c}; }
  static RadiusProfile linear(double a, double c, bool decreasing) {
    return {Kind::Linear, a, 0, decreasing, c};
  }
  static RadiusProfile quadratic(double a, double b, double c) {
    return {Kind::Quadratic, a, b, false, c};
  }
};

// One certified span of a ball tube: center polynomials, interval, profile.
struct TubeSpan {
  std::vector<Polynomial> center;
  double t1 = 0.0, t2 = 1.0;
  RadiusProfile profile;
  VerifyReport report;
};

struct Tube {
  std::vector<TubeSpan> spans;
  bool certified = false;

  double min_radius() const;
  double max_radius() const;
  std::vector<double> center_at(double t) const;
  double radius_at(double t) const;
  double t0() const { return spans.front().t1; }
  double tf() const { return spans.back().t2; }
};

struct TubeSearchConfig {
  double c_max = 0.5;
  double eps = 1e-3;
  RadiusProfile profile;  // kind and fixed shape parameters; c is searched
  double r_min = 0.0;     // Method (2) minimum tube size
  double w = 0.0;         // objective weight, recorded as a diagnostic only
  VerifyOptions verify;

  void validate() const;
};

// Bracket state of the size search: Verify(lo) held, Verify(hi) failed unless
// hi == c_max.
struct BuildTubeResult {
  bool ok = false;  // FAIL when the initial lower bound is not verifiable
  double c = 0.0;
  double bracket_hi = 0.0;
  int verify_calls = 0;
  VerifyReport report;  // certificate at the returned c
};

// Binary search core (Algorithm "max-sized tube"): largest parameter in
// [l0, c_max] accepted by verify, within eps. Assumes monotone acceptance;
// the returned value is always re-verified by the caller regardless.
double binary_search_max(const std::function<bool(double)>& verify, double c_max, double eps,
                         double l0, double* bracket_hi, int* calls);

// Builds the tube size polynomial for profile/c and runs cert::verify_tube.
bool verify_tube_size(const std::vector<Polynomial>& center, double t1, double t2,
                      const FreeSpace& free, const RadiusProfile& profile, double c,
                      const VerifyOptions& opts, VerifyReport* out = nullptr);

// Max-sized tube along one span. Returns FAIL (ok = false) when the span is
// not verifiable at c = l0 (l0 defaults to 0: the bare trajectory).
BuildTubeResult build_tube(const std::vector<Polynomial>& center, double t1, double t2,
                           const FreeSpace& free, const TubeSearchConfig& cfg, double l0 = 0.0);

// Objective of the tube problem: trajectory length + w / min_radius^2
// (Q(t) = I / r(t)^2 for ball tubes). Diagnostic only.
double tube_objective(double traj_length, const Tube& tube, double w);

// Per-piece max-sized tubes with knots at the given times (which must include
// the endpoints). cfgs has one entry per piece or a single broadcast entry.
std::vector<BuildTubeResult> subdivide_and_tube(const PiecewiseLinearTrajectory& traj,
                                                const std::vector<double>& knots,
                                                const FreeSpace& free, const Universe& u,
                                                const std::vector<TubeSearchConfig>& cfgs,
                                                std::vector<TubeSpan>* spans_out = nullptr);

struct PlanWithTubeResult {
  PlanResult plan;
  Tube tube;
};

// Method (2): every RRT edge must admit a tube of size r_min; after the path
// is found, each piece's tube is maximized by binary search in [r_min, c_max].
PlanWithTubeResult plan_with_tube(const PlanRequest& req, const TubeSearchConfig& cfg);

}  // namespace riskplan
