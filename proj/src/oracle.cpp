#include "riskplan/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "riskplan/kernels.hpp"
#include "riskplan/parallel.hpp"
#include "riskplan/rng.hpp"

namespace riskplan {

namespace {

constexpr long kChunk = 8192;

struct OmegaVars {
  std::vector<int> indices;  // uncertain variable indices appearing in the body
};

OmegaVars omega_vars_of(const Polynomial& p) {
  OmegaVars w;
  for (const auto& [m, c] : p.terms())
    for (const auto& f : m.factors())
      if (f.var.kind == VarKind::Uncertain)
        if (std::find(w.indices.begin(), w.indices.end(), f.var.index) == w.indices.end())
          w.indices.push_back(f.var.index);
  std::sort(w.indices.begin(), w.indices.end());
  return w;
}

RiskEstimate finish_estimate(long hits, long n, uint64_t seed) {
  RiskEstimate e;
  e.n = n;
  e.seed = seed;
  e.p_hat = n > 0 ? static_cast<double>(hits) / n : 0.0;
  e.se = n > 0 ? std::sqrt(std::max(0.0, e.p_hat * (1.0 - e.p_hat)) / n) : 0.0;
  return e;
}

// Counts body(w) >= 0 over n draws; body must depend only on Uncertain vars.
long count_collisions(const Polynomial& body_w, const std::vector<DistributionSpec>& dists,
                      long n, uint64_t seed) {
  OmegaVars w = omega_vars_of(body_w);
  for (int idx : w.indices)
    if (idx >= static_cast<int>(dists.size()))
      throw UndeclaredVariable("obstacle references w" + std::to_string(idx + 1) +
                               " with no distribution");

  if (w.indices.empty()) return body_w.constant_value() >= 0.0 ? n : 0;

  std::vector<VarId> order;
  for (int idx : w.indices) order.push_back(VarId::uncertain(idx));
  auto compiled = kernels::CompiledPoly::compile(body_w, order);

  const long n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<long> hits(n_chunks, 0);
  parallel_for(static_cast<size_t>(n_chunks), [&](size_t ci) {
    const long begin = static_cast<long>(ci) * kChunk;
    const long len = std::min(kChunk, n - begin);
    std::vector<std::vector<double>> draws(w.indices.size(), std::vector<double>(len));
    for (size_t vi = 0; vi < w.indices.size(); ++vi) {
      Rng rng = make_stream(seed, ci * 64 + vi);
      const auto& d = dists[w.indices[vi]];
      for (long i = 0; i < len; ++i) draws[vi][i] = sample(d, rng);
    }
    std::vector<const double*> inputs;
    for (auto& col : draws) inputs.push_back(col.data());
    std::vector<double> vals(len);
    kernels::eval_batch(compiled, inputs.data(), len, vals.data());
    hits[ci] = static_cast<long>(kernels::count_nonneg(vals.data(), len));
  });
  long total = 0;
  for (long h : hits) total += h;
  return total;
}

Polynomial bind_point(const Polynomial& body, const std::vector<double>& x,
                      std::optional<double> t) {
  std::map<VarId, Polynomial> bind;
  Universe u = body.universe();
  for (size_t k = 0; k < x.size(); ++k) bind[VarId::state(k)] = Polynomial::constant(x[k], u);
  if (t) bind[VarId::time()] = Polynomial::constant(*t, u);
  return body.substitute(bind);
}

}  // namespace

RiskEstimate mc_point_risk(const std::vector<double>& x, const Obstacle& obs,
                           const std::vector<DistributionSpec>& dists, std::optional<double> t,
                           long n, uint64_t seed) {
  if (obs.kind == Obstacle::Kind::Dynamic && !t)
    throw MissingTime("dynamic obstacle risk needs a time");
  Polynomial body_w = bind_point(obs.body, x, t);
  if (body_w.degree_in(VarKind::State) > 0)
    throw MissingVariable("mc_point_risk: point does not cover all state variables");
  return finish_estimate(count_collisions(body_w, dists, n, seed), n, seed);
}

double TrajectoryRiskReport::max_risk() const {
  double m = 0.0;
  for (const auto& o : per_obstacle) m = std::max(m, o.max_risk.p_hat);
  return m;
}

TrajectoryRiskReport mc_trajectory_risk(
    const std::function<std::vector<double>(double)>& position, double t0, double tf,
    const std::vector<Obstacle>& obstacles, const std::vector<DistributionSpec>& dists,
    long n_omega, int n_t, uint64_t seed) {
  if (n_t < 2) throw ConfigError("mc_trajectory_risk needs n_t >= 2");
  TrajectoryRiskReport report;
  report.n_omega = n_omega;
  report.n_t = n_t;
  for (size_t oi = 0; oi < obstacles.size(); ++oi) {
    ObstacleRisk best;
    best.name = obstacles[oi].name;
    for (int j = 0; j < n_t; ++j) {
      double t = t0 + (tf - t0) * static_cast<double>(j) / (n_t - 1);
      uint64_t point_seed = derive_seed(seed, oi * 1000003ULL + j);
      RiskEstimate e = mc_point_risk(position(t), obstacles[oi],
                                     dists, t, n_omega, point_seed);
      if (e.p_hat > best.max_risk.p_hat || j == 0) {
        best.max_risk = e;
        best.argmax_t = t;
      }
    }
    report.per_obstacle.push_back(std::move(best));
  }
  return report;
}

double TubeRiskReport::max_point_risk() const {
  double m = 0.0;
  for (const auto& o : per_obstacle) m = std::max(m, o.max_risk.p_hat);
  return m;
}

TubeRiskReport mc_tube_risk(const std::function<std::vector<double>(double)>& center,
                            const std::function<double(double)>& radius, double t0, double tf,
                            const std::vector<Obstacle>& obstacles,
                            const std::vector<DistributionSpec>& dists, long n_omega, int n_t,
                            int n_x, uint64_t seed) {
  if (n_t < 2) throw ConfigError("mc_tube_risk needs n_t >= 2");
  TubeRiskReport report;
  report.n_omega = n_omega;
  report.n_t = n_t;
  report.n_x = n_x;
  report.per_obstacle.resize(obstacles.size());
  for (size_t oi = 0; oi < obstacles.size(); ++oi) {
    report.per_obstacle[oi].name = obstacles[oi].name;
  }

  for (int j = 0; j < n_t; ++j) {
    const double t = t0 + (tf - t0) * static_cast<double>(j) / (n_t - 1);
    const std::vector<double> c = center(t);
    const double r = radius(t);
    const int dim = static_cast<int>(c.size());

    // Tube slice points: the center plus uniform draws in the ball.
    Rng prng = make_stream(seed, 0xb000000ULL + j);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::vector<double>> pts;
    pts.push_back(c);
    while (static_cast<int>(pts.size()) < std::max(1, n_x)) {
      std::vector<double> p(dim);
      double d2 = 0.0;
      for (int k = 0; k < dim; ++k) {
        p[k] = unit(prng) * r;
        d2 += p[k] * p[k];
      }
      if (d2 > r * r) continue;  // rejection sampling in the ball
      for (int k = 0; k < dim; ++k) p[k] += c[k];
      pts.push_back(std::move(p));
      if (r == 0.0) break;
    }

    for (size_t oi = 0; oi < obstacles.size(); ++oi) {
      const Obstacle& obs = obstacles[oi];
      std::optional<double> ot =
          obs.kind == Obstacle::Kind::Dynamic ? std::optional<double>(t) : std::nullopt;

      // Shared omega draws per (time, obstacle): per-point risks plus the
      // any-point intersection indicator over the same draws.
      Polynomial body_t = obs.body;
      if (ot) {
        std::map<VarId, Polynomial> bind;
        bind[VarId::time()] = Polynomial::constant(t, obs.body.universe());
        body_t = body_t.substitute(bind);
      }
      OmegaVars w = omega_vars_of(body_t);
      std::vector<VarId> order;
      for (int idx : w.indices) order.push_back(VarId::uncertain(idx));

      uint64_t slice_seed = derive_seed(seed, (oi + 1) * 7000003ULL + j);
      const long n_chunks = (n_omega + kChunk - 1) / kChunk;
      std::vector<long> worst_hits(n_chunks, 0), inter_hits(n_chunks, 0);
      std::vector<std::vector<long>> point_hits(n_chunks,
                                                std::vector<long>(pts.size(), 0));
      parallel_for(static_cast<size_t>(n_chunks), [&](size_t ci) {
        const long begin = static_cast<long>(ci) * kChunk;
        const long len = std::min<long>(kChunk, n_omega - begin);
        std::vector<std::vector<double>> draws(w.indices.size(), std::vector<double>(len));
        for (size_t vi = 0; vi < w.indices.size(); ++vi) {
          Rng rng = make_stream(slice_seed, ci * 64 + vi);
          for (long i = 0; i < len; ++i) draws[vi][i] = sample(dists[w.indices[vi]], rng);
        }
        std::vector<const double*> inputs;
        for (auto& col : draws) inputs.push_back(col.data());
        std::vector<double> vals(len);
        std::vector<uint8_t> any(len, 0);
        for (size_t pi = 0; pi < pts.size(); ++pi) {
          Polynomial body_w = bind_point(body_t, pts[pi], std::nullopt);
          if (w.indices.empty()) {
            bool hit = body_w.constant_value() >= 0.0;
            point_hits[ci][pi] = hit ? len : 0;
            if (hit) std::fill(any.begin(), any.end(), uint8_t(1));
            continue;
          }
          auto compiled = kernels::CompiledPoly::compile(body_w, order);
          kernels::eval_batch(compiled, inputs.data(), len, vals.data());
          point_hits[ci][pi] = static_cast<long>(kernels::count_nonneg(vals.data(), len));
          for (long i = 0; i < len; ++i) any[i] |= vals[i] >= 0.0 ? 1 : 0;
        }
        long inter = 0;
        for (long i = 0; i < len; ++i) inter += any[i];
        inter_hits[ci] = inter;
      });

      for (size_t pi = 0; pi < pts.size(); ++pi) {
        long hits = 0;
        for (long ci = 0; ci < n_chunks; ++ci) hits += point_hits[ci][pi];
        RiskEstimate e = finish_estimate(hits, n_omega, slice_seed);
        auto& rec = report.per_obstacle[oi];
        if (e.p_hat > rec.max_risk.p_hat || (j == 0 && pi == 0)) {
          rec.max_risk = e;
          rec.argmax_t = t;
        }
      }
      long inter_total = 0;
      for (long ci = 0; ci < n_chunks; ++ci) inter_total += inter_hits[ci];
      double inter_risk = static_cast<double>(inter_total) / n_omega;
      if (inter_risk > report.max_intersection_risk) {
        report.max_intersection_risk = inter_risk;
        report.intersection_argmax_t = t;
      }
    }
  }
  return report;
}

}  // namespace riskplan
