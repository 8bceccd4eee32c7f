#include "riskplan/tube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskplan {

RadiusProfile RadiusProfile::with_c(double new_c) const {
  RadiusProfile p = *this;
  p.c = new_c;
  return p;
}

void RadiusProfile::validate() const {
  if (c < 0) throw ConfigError("tube radius parameter c must be >= 0");
  switch (kind) {
    case Kind::Constant:
      break;
    case Kind::Linear:
      if (a < 0) throw ConfigError("linear profile slope a must be >= 0");
      break;
    case Kind::Quadratic:
      if (!(a > 0)) throw ConfigError("quadratic profile needs a > 0");
      if (b < 0 || b > 1) throw ConfigError("quadratic profile needs 0 <= b <= 1");
      break;
  }
}

double RadiusProfile::radius(double tau) const {
  switch (kind) {
    case Kind::Constant:
      return c;
    case Kind::Linear:
      return a * (decreasing ? 1.0 - tau : tau) + c;
    case Kind::Quadratic:
      return a * (tau - b) * (tau - b) + c;
  }
  return c;
}

double RadiusProfile::min_radius() const { return c; }  // all profiles bottom out at c

double RadiusProfile::max_radius() const {
  switch (kind) {
    case Kind::Constant:
      return c;
    case Kind::Linear:
      return a + c;
    case Kind::Quadratic:
      return a * std::max(b * b, (1 - b) * (1 - b)) + c;
  }
  return c;
}

Polynomial RadiusProfile::r2_poly(const Universe& u, double t1, double t2) const {
  Universe ut = u;
  ut.has_time = true;
  if (!(t1 < t2)) throw Error("radius profile needs t1 < t2");
  Polynomial t = Polynomial::variable(VarId::time(), ut);
  Polynomial tau = (t - Polynomial::constant(t1, ut)) * (1.0 / (t2 - t1));
  Polynomial r;
  switch (kind) {
    case Kind::Constant:
      r = Polynomial::constant(c, ut);
      break;
    case Kind::Linear: {
      Polynomial arg = decreasing ? Polynomial::constant(1.0, ut) - tau : tau;
      r = arg * a + Polynomial::constant(c, ut);
      break;
    }
    case Kind::Quadratic: {
      Polynomial d = tau - Polynomial::constant(b, ut);
      r = d * d * a + Polynomial::constant(c, ut);
      break;
    }
  }
  return r * r;
}

double Tube::min_radius() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : spans) m = std::min(m, s.profile.min_radius());
  return m;
}

double Tube::max_radius() const {
  double m = 0.0;
  for (const auto& s : spans) m = std::max(m, s.profile.max_radius());
  return m;
}

std::vector<double> Tube::center_at(double t) const {
  for (const auto& s : spans) {
    if (t <= s.t2 || &s == &spans.back()) {
      Assignment at;
      at.time = t;
      std::vector<double> x;
      for (const auto& p : s.center) x.push_back(p.eval(at));
      return x;
    }
  }
  throw Error("empty tube");
}

double Tube::radius_at(double t) const {
  for (const auto& s : spans) {
    if (t <= s.t2 || &s == &spans.back()) {
      double tau = (t - s.t1) / (s.t2 - s.t1);
      return s.profile.radius(std::clamp(tau, 0.0, 1.0));
    }
  }
  throw Error("empty tube");
}

void TubeSearchConfig::validate() const {
  if (!(eps > 0) || !(eps < c_max)) throw ConfigError("tube search needs 0 < eps < c_max");
  if (r_min > c_max) throw ConfigError("tube search needs r_min <= c_max");
  RadiusProfile p = profile;
  p.c = 0.0;
  p.validate();
}

double binary_search_max(const std::function<bool(double)>& verify, double c_max, double eps,
                         double l0, double* bracket_hi, int* calls) {
  int n = 0;
  double lo = l0, hi = c_max;
  // One probe at the top first: if c_max itself verifies, the bracket is closed.
  ++n;
  if (verify(c_max)) {
    if (bracket_hi) *bracket_hi = c_max;
    if (calls) *calls = n;
    return c_max;
  }
  while (hi - lo > eps) {
    double mid = 0.5 * (lo + hi);
    ++n;
    if (verify(mid))
      lo = mid;
    else
      hi = mid;
  }
  if (bracket_hi) *bracket_hi = hi;
  if (calls) *calls = n;
  return lo;
}

bool verify_tube_size(const std::vector<Polynomial>& center, double t1, double t2,
                      const FreeSpace& free, const RadiusProfile& profile, double c,
                      const VerifyOptions& opts, VerifyReport* out) {
  if (c < 0) throw ConfigError("tube size must be >= 0");
  Universe u;
  for (const auto& p : center) u = Universe::merged(u, p.universe());
  u.n_state = free.workspace.dim();
  Polynomial r2 = profile.with_c(c).r2_poly(u, t1, t2);
  VerifyReport report = verify_tube(center, r2, t1, t2, free, opts);
  if (out) *out = report;
  return report.verified();
}

BuildTubeResult build_tube(const std::vector<Polynomial>& center, double t1, double t2,
                           const FreeSpace& free, const TubeSearchConfig& cfg, double l0) {
  cfg.validate();
  BuildTubeResult result;
  VerifyReport report;
  ++result.verify_calls;
  if (!verify_tube_size(center, t1, t2, free, cfg.profile, l0, cfg.verify, &report)) {
    result.ok = false;
    result.report = report;
    return result;  // FAIL: even the smallest tube is not verifiable
  }
  int calls = 0;
  double hi = cfg.c_max;
  double best = binary_search_max(
      [&](double c) {
        return verify_tube_size(center, t1, t2, free, cfg.profile, c, cfg.verify, nullptr);
      },
      cfg.c_max, cfg.eps, l0, &hi, &calls);
  result.verify_calls += calls;

  // Fixed-degree verification need not be monotone in c; the reported tube is
  // re-verified so it always carries its own certificate.
  ++result.verify_calls;
  if (!verify_tube_size(center, t1, t2, free, cfg.profile, best, cfg.verify, &result.report)) {
    result.c = l0;
    result.bracket_hi = best;
    verify_tube_size(center, t1, t2, free, cfg.profile, l0, cfg.verify, &result.report);
    result.ok = result.report.verified();
    return result;
  }
  result.ok = true;
  result.c = best;
  result.bracket_hi = hi;
  return result;
}

double tube_objective(double traj_length, const Tube& tube, double w) {
  if (w == 0.0) return traj_length;
  double r = tube.min_radius();
  if (!(r > 0)) return std::numeric_limits<double>::infinity();
  return traj_length + w / (r * r);
}

std::vector<BuildTubeResult> subdivide_and_tube(const PiecewiseLinearTrajectory& traj,
                                                const std::vector<double>& knots,
                                                const FreeSpace& free, const Universe& u,
                                                const std::vector<TubeSearchConfig>& cfgs,
                                                std::vector<TubeSpan>* spans_out) {
  if (knots.size() < 2) throw ConfigError("subdivide_and_tube needs at least two knots");
  for (size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i] < knots[i + 1])) throw ConfigError("knots must be increasing");
  if (std::abs(knots.front() - traj.t0) > 1e-12 || std::abs(knots.back() - traj.tf) > 1e-12)
    throw ConfigError("knots must span the trajectory horizon");
  const size_t n_pieces = knots.size() - 1;
  if (cfgs.size() != 1 && cfgs.size() != n_pieces)
    throw ConfigError("one tube config per piece (or a single broadcast config)");

  std::vector<BuildTubeResult> results;
  for (size_t i = 0; i < n_pieces; ++i) {
    const TubeSearchConfig& cfg = cfgs.size() == 1 ? cfgs[0] : cfgs[i];
    double ta = knots[i], tb = knots[i + 1];
    // Center polynomials on [ta, tb]; spans must respect piece boundaries.
    double mid = 0.5 * (ta + tb);
    int piece = std::clamp(static_cast<int>((mid - traj.t0) / (traj.tf - traj.t0) *
                                            traj.piece_count()),
                           0, traj.piece_count() - 1);
    if (traj.knot(piece) - 1e-12 > ta || traj.knot(piece + 1) + 1e-12 < tb)
      throw ConfigError("knot span crosses a trajectory piece boundary");
    auto center = traj.piece_polys(piece, u);
    BuildTubeResult r = build_tube(center, ta, tb, free, cfg);
    if (spans_out) {
      TubeSpan span;
      span.center = center;
      span.t1 = ta;
      span.t2 = tb;
      span.profile = cfg.profile.with_c(r.ok ? r.c : 0.0);
      span.report = r.report;
      spans_out->push_back(std::move(span));
    }
    results.push_back(std::move(r));
  }
  return results;
}

PlanWithTubeResult plan_with_tube(const PlanRequest& req, const TubeSearchConfig& cfg) {
  cfg.validate();
  if (!(cfg.r_min > 0)) throw ConfigError("plan_with_tube needs r_min > 0");

  // Edge acceptance: the edge must admit a tube of size r_min.
  EdgeCheck check = [&](const std::vector<double>& a, const std::vector<double>& b, double ta,
                        double tb) {
    auto traj = PiecewiseLinearTrajectory::from_waypoints({a, b}, ta, tb);
    auto center = traj.piece_polys(0, req.universe);
    return verify_tube_size(center, ta, tb, req.free, cfg.profile, cfg.r_min, cfg.verify,
                            nullptr);
  };

  bool dynamic = false;
  for (const auto& c : req.free.contours) dynamic |= c.time_varying;

  PlanWithTubeResult out;
  out.plan = grow_rrt(req, check, dynamic ? std::max(2, req.config.pieces) : 1);
  if (!out.plan.found()) return out;

  // Maximize each piece's tube; the search starts at the already-certified
  // r_min, so the final tube keeps the Method (2) size guarantee.
  const auto& traj = out.plan.trajectory;
  out.tube.certified = true;
  for (int i = 0; i < traj.piece_count(); ++i) {
    auto center = traj.piece_polys(i, req.universe);
    double ta = traj.knot(i), tb = traj.knot(i + 1);
    BuildTubeResult r = build_tube(center, ta, tb, req.free, cfg, cfg.r_min);
    TubeSpan span;
    span.center = center;
    span.t1 = ta;
    span.t2 = tb;
    span.profile = cfg.profile.with_c(r.ok ? r.c : cfg.r_min);
    span.report = r.report;
    out.tube.certified = out.tube.certified && r.ok && r.report.verified();
    out.tube.spans.push_back(std::move(span));
    out.plan.piece_reports.push_back(out.tube.spans.back().report);
  }
  if (!out.tube.certified) {
    out.plan.status = PlanStatus::NoPathFound;
    out.plan.failure_reason = "tube maximization lost the r_min certificate";
  }
  return out;
}

}  // namespace riskplan
