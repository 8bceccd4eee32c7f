#include "riskplan/dist.hpp"

#include <cmath>
#include <sstream>

namespace riskplan {

DistributionSpec DistributionSpec::uniform(double l, double u) {
  if (!(l < u)) throw ConfigError("uniform distribution requires l < u");
  return {Kind::Uniform, l, u};
}

DistributionSpec DistributionSpec::gaussian(double mu, double var) {
  if (!(var > 0)) throw ConfigError("gaussian distribution requires var > 0");
  return {Kind::Gaussian, mu, var};
}

DistributionSpec DistributionSpec::beta(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw ConfigError("beta distribution requires a > 0, b > 0");
  return {Kind::Beta, a, b};
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Uniform:
      os << "uniform[" << p1 << "," << p2 << "]";
      break;
    case Kind::Gaussian:
      os << "gaussian(mu=" << p1 << ",var=" << p2 << ")";
      break;
    case Kind::Beta:
      os << "beta(" << p1 << "," << p2 << ")";
      break;
  }
  return os.str();
}

double raw_moment(const DistributionSpec& d, int alpha) {
  if (alpha < 0) throw ConfigError("moment order must be nonnegative");
  if (alpha == 0) return 1.0;
  switch (d.kind) {
    case DistributionSpec::Kind::Uniform: {
      const double l = d.p1, u = d.p2;
      return (std::pow(u, alpha + 1) - std::pow(l, alpha + 1)) / ((u - l) * (alpha + 1));
    }
    case DistributionSpec::Kind::Gaussian: {
      // Two-term recursion, algebraically equal to the Kummer-function form.
      const double mu = d.p1, var = d.p2;
      double m_prev = 1.0, m_cur = mu;
      for (int k = 2; k <= alpha; ++k) {
        double m_next = mu * m_cur + (k - 1) * var * m_prev;
        m_prev = m_cur;
        m_cur = m_next;
      }
      return m_cur;
    }
    case DistributionSpec::Kind::Beta: {
      const double a = d.p1, b = d.p2;
      double y = 1.0;
      for (int k = 1; k <= alpha; ++k) y *= (a + k - 1) / (a + b + k - 1);
      return y;
    }
  }
  throw Error("unreachable");
}

double sample(const DistributionSpec& d, Rng& rng) {
  switch (d.kind) {
    case DistributionSpec::Kind::Uniform: {
      std::uniform_real_distribution<double> u(d.p1, d.p2);
      return u(rng);
    }
    case DistributionSpec::Kind::Gaussian: {
      std::normal_distribution<double> n(d.p1, std::sqrt(d.p2));
      return n(rng);
    }
    case DistributionSpec::Kind::Beta: {
      std::gamma_distribution<double> ga(d.p1, 1.0), gb(d.p2, 1.0);
      double x = ga(rng), y = gb(rng);
      return x / (x + y);
    }
  }
  throw Error("unreachable");
}

MomentTable MomentTable::build(const std::vector<DistributionSpec>& dists, int order) {
  return build(dists, std::vector<int>(dists.size(), order));
}

MomentTable MomentTable::build(const std::vector<DistributionSpec>& dists,
                               const std::vector<int>& orders) {
  if (dists.size() != orders.size()) throw ConfigError("one moment order per distribution");
  MomentTable t;
  t.moments_.resize(dists.size());
  for (size_t i = 0; i < dists.size(); ++i) {
    t.moments_[i].resize(orders[i] + 1);
    for (int a = 0; a <= orders[i]; ++a) t.moments_[i][a] = raw_moment(dists[i], a);
  }
  return t;
}

double MomentTable::moment(int w_index, int alpha) const {
  if (w_index < 0 || w_index >= variable_count())
    throw InsufficientMomentOrder("no moments for w" + std::to_string(w_index + 1));
  if (alpha < 0 || alpha >= static_cast<int>(moments_[w_index].size()))
    throw InsufficientMomentOrder("moment order " + std::to_string(alpha) + " of w" +
                                  std::to_string(w_index + 1) + " not available");
  return moments_[w_index][alpha];
}

Polynomial expectation(const Polynomial& p, const MomentTable& moments) {
  Universe u = p.universe();
  Polynomial r;
  r.set_universe({u.n_state, 0, u.has_time});
  for (const auto& [m, c] : p.terms()) {
    double coeff = c;
    std::vector<Monomial::Factor> rest;
    for (const auto& f : m.factors()) {
      if (f.var.kind == VarKind::Uncertain) {
        coeff *= moments.moment(f.var.index, f.exp);
      } else {
        rest.push_back(f);
      }
    }
    r.add_term(Monomial(std::move(rest)), coeff);
  }
  r.normalize();
  return r;
}

}  // namespace riskplan
