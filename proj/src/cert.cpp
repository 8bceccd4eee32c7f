#include "riskplan/cert.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "riskplan/parallel.hpp"
#include "riskplan/rng.hpp"

namespace riskplan {

namespace {

// Rejection threshold for the sampling prefilter, relative to the constraint's
// coefficient scale. Only ever used to reject, never to accept.
double reject_tol(const Polynomial& g) { return -1e-10 * std::max(1.0, g.max_abs_coeff()); }

Certificate sampled_negative(const std::string& label, double value, double t) {
  Certificate c;
  c.status = CertStatus::NotVerified;
  c.reason = CertReason::SampledNegative;
  c.constraint_label = label;
  c.witness_value = value;
  c.witness_time = t;
  return c;
}

Certificate solve_with_boosts(const Polynomial& g, const Polynomial* h, double t1, double t2,
                              int max_boost, const SolverConfig& solver,
                              const std::string& label) {
  Certificate last;
  for (int boost = 0; boost <= max_boost; boost += 2) {
    SosProgram prog = h ? assemble_tube(g, *h, t1, t2, boost) : assemble_interval(g, t1, t2, boost);
    Certificate cert = solve(prog, solver);
    cert.constraint_label = label;
    cert.degree_boost = boost;
    cert.solve_time_s += last.solve_time_s;  // accumulate across boosts
    if (cert.verified() || cert.status == CertStatus::SolverError) return cert;
    last = cert;
  }
  return last;
}

VerifyReport run_constraints(const std::vector<Polynomial>& gs,
                             const std::vector<std::string>& labels,
                             const std::function<Certificate(const Polynomial&, const std::string&)>& check,
                             bool parallel) {
  const auto t_start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.constraints.resize(gs.size());
  auto task = [&](size_t i) {
    report.constraints[i].label = labels[i];
    report.constraints[i].cert = check(gs[i], labels[i]);
  };
  if (parallel)
    parallel_for(gs.size(), task);
  else
    for (size_t i = 0; i < gs.size(); ++i) task(i);

  report.status = CertStatus::Verified;
  for (const auto& c : report.constraints) {
    if (c.cert.status == CertStatus::SolverError) {
      report.status = CertStatus::SolverError;
      break;
    }
    if (!c.cert.verified()) report.status = CertStatus::NotVerified;
  }
  report.total_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace

const ConstraintResult* VerifyReport::first_failure() const {
  for (const auto& c : constraints)
    if (!c.cert.verified()) return &c;
  return nullptr;
}

VerifyReport verify_segment(const std::vector<Polynomial>& x_of_t, double t1, double t2,
                            const FreeSpace& free, const VerifyOptions& opts) {
  if (!(t1 < t2)) throw Error("verify_segment: degenerate interval (t1 >= t2)");
  if (static_cast<int>(x_of_t.size()) != free.workspace.dim())
    throw Error("verify_segment: trajectory dimension mismatch");

  Universe u;
  for (const auto& p : x_of_t) u = Universe::merged(u, p.universe());
  u.n_state = free.workspace.dim();
  u.has_time = true;

  std::map<VarId, Polynomial> bind;
  for (size_t k = 0; k < x_of_t.size(); ++k) bind[VarId::state(k)] = x_of_t[k];

  std::vector<Polynomial> gs;
  for (const auto& g : free.constraint_polys(u)) gs.push_back(g.substitute(bind));
  std::vector<std::string> labels = free.constraint_labels();

  auto check = [&](const Polynomial& g, const std::string& label) -> Certificate {
    // Cheap disproof first: sample the univariate constraint on the interval.
    const int n = std::max(2, opts.prefilter_time_samples);
    const double tol = reject_tol(g);
    for (int i = 0; i < n; ++i) {
      double t = t1 + (t2 - t1) * static_cast<double>(i) / (n - 1);
      Assignment at;
      at.time = t;
      double v = g.eval(at);
      if (v < tol) return sampled_negative(label, v, t);
    }
    return solve_with_boosts(g, nullptr, t1, t2, opts.degrees.max_boost_interval, opts.solver,
                             label);
  };
  return run_constraints(gs, labels, check, opts.parallel);
}

VerifyReport verify_tube(const std::vector<Polynomial>& center, const Polynomial& r2_of_t,
                         double t1, double t2, const FreeSpace& free,
                         const VerifyOptions& opts) {
  if (!(t1 < t2)) throw Error("verify_tube: degenerate interval (t1 >= t2)");
  const int dim = free.workspace.dim();
  if (static_cast<int>(center.size()) != dim) throw Error("verify_tube: center dimension mismatch");

  Universe u;
  for (const auto& p : center) u = Universe::merged(u, p.universe());
  u = Universe::merged(u, r2_of_t.universe());
  u.n_state = dim;
  u.has_time = true;

  // Rescale state onto [-1,1]^dim for conditioning: x_k = mid_k + half_k * y_k.
  std::map<VarId, Polynomial> to_world;
  std::vector<double> mid(dim), half(dim);
  for (int k = 0; k < dim; ++k) {
    mid[k] = 0.5 * (free.workspace.lo[k] + free.workspace.hi[k]);
    half[k] = 0.5 * (free.workspace.hi[k] - free.workspace.lo[k]);
    if (!(half[k] > 0)) throw Error("verify_tube: degenerate workspace box");
    to_world[VarId::state(k)] =
        Polynomial::constant(mid[k], u) + Polynomial::variable(VarId::state(k), u) * half[k];
  }

  // h(x,t) = r(t)^2 - ||x - center(t)||^2, then x -> world(y).
  Polynomial h = r2_of_t;
  h.set_universe(Universe::merged(h.universe(), u));
  for (int k = 0; k < dim; ++k) {
    Polynomial d = Polynomial::variable(VarId::state(k), u) - center[k];
    h = h - d * d;
  }
  Polynomial h_scaled = h.substitute(to_world);

  std::vector<Polynomial> gs;
  for (const auto& g : free.constraint_polys(u)) gs.push_back(g.substitute(to_world));
  std::vector<std::string> labels = free.constraint_labels();

  // Prefilter sampler: points in the tube slice at sampled times.
  auto radius_at = [&](double t) {
    Assignment at;
    at.time = t;
    double r2 = r2_of_t.eval(at);
    return r2 > 0 ? std::sqrt(r2) : 0.0;
  };
  auto center_at = [&](double t) {
    Assignment at;
    at.time = t;
    std::vector<double> x(dim);
    for (int k = 0; k < dim; ++k) x[k] = center[k].eval(at);
    return x;
  };

  auto check = [&](const Polynomial& g_scaled, const std::string& label) -> Certificate {
    const int nt = std::max(2, opts.prefilter_time_samples);
    const int nx = std::max(1, opts.prefilter_space_samples);
    const double tol = reject_tol(g_scaled);
    Rng rng = make_stream(0x7b3, 17);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < nt; ++i) {
      double t = t1 + (t2 - t1) * static_cast<double>(i) / (nt - 1);
      double r = radius_at(t);
      std::vector<double> c = center_at(t);
      for (int j = 0; j < nx; ++j) {
        Assignment at;
        at.time = t;
        at.state.resize(dim);
        // Center point first, then random points in the slice ball.
        for (int k = 0; k < dim; ++k) {
          double offset = (j == 0) ? 0.0 : unit(rng) * r;
          at.state[k] = (c[k] + offset - mid[k]) / half[k];
        }
        // Reject draws outside the ball (cube sampling).
        double d2 = 0.0;
        for (int k = 0; k < dim; ++k) {
          double w = (at.state[k] * half[k] + mid[k]) - c[k];
          d2 += w * w;
        }
        if (d2 > r * r + 1e-15) continue;
        double v = g_scaled.eval(at);
        if (v < tol) return sampled_negative(label, v, t);
      }
    }
    return solve_with_boosts(g_scaled, &h_scaled, t1, t2, opts.degrees.max_boost_tube,
                             opts.solver, label);
  };
  return run_constraints(gs, labels, check, opts.parallel);
}

}  // namespace riskplan
