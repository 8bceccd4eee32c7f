#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "riskplan/dist.hpp"
#include "riskplan/poly_io.hpp"

using namespace riskplan;

namespace {

// Adaptive Simpson quadrature; test-side oracle, independent of the moment
// recursions it checks.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, fm, flm, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(b), f(m), tol, 48);
}

double lgamma_(double x) { return std::lgamma(x); }

// Quadrature moment of each family, computed on a rescaled O(1) integrand so
// relative accuracy survives for tiny high-order moments; Beta uses square-root
// substitutions to tame the endpoint singularities.
double quadrature_moment(const DistributionSpec& d, int alpha, double* scale_out) {
  switch (d.kind) {
    case DistributionSpec::Kind::Uniform: {
      double l = d.p1, u = d.p2;
      double c = std::max(std::abs(l), std::abs(u));
      *scale_out = std::pow(c, alpha);
      // t = c s keeps s^alpha in [-1, 1].
      return *scale_out *
             integrate([&](double s) { return std::pow(s, alpha) * c / (u - l); }, l / c, u / c,
                       1e-13);
    }
    case DistributionSpec::Kind::Gaussian: {
      double mu = d.p1, sigma = std::sqrt(d.p2);
      *scale_out = std::pow(sigma, alpha);
      // t = mu + sigma z; factor sigma^alpha out of t^alpha.
      auto f = [&](double z) {
        return std::pow(mu / sigma + z, alpha) * std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI);
      };
      return *scale_out * integrate(f, -14.0, 14.0, 1e-13);
    }
    case DistributionSpec::Kind::Beta: {
      // Integrand t^(a+alpha-1) (1-t)^(b-1) / B, split at 1/2 with square-root
      // substitutions smoothing both endpoint singularities (a, b >= 1/2).
      *scale_out = 1.0;
      double a = d.p1, b = d.p2;
      double logB = lgamma_(a) + lgamma_(b) - lgamma_(a + b);
      auto lower = [&](double s) {
        double t = s * s;
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return 2.0 * std::exp((2 * (a + alpha) - 1) * std::log(s) + (b - 1) * std::log(1 - t) -
                              logB);
      };
      auto upper = [&](double s) {
        double t = 1.0 - s * s;
        if (t <= 0.0 || s <= 0.0) return 0.0;
        return 2.0 * std::exp((a + alpha - 1) * std::log(t) + (2 * b - 1) * std::log(s) - logB);
      };
      double split = std::sqrt(0.5);
      return integrate(lower, 0.0, split, 1e-12) + integrate(upper, 0.0, split, 1e-12);
    }
  }
  return 0.0;
}

}  // namespace

TEST_CASE("raw moments match paper closed forms") {
  auto u = DistributionSpec::uniform(0.3, 0.4);
  CHECK(raw_moment(u, 2) == doctest::Approx(0.37 / 3.0).epsilon(1e-12));  // 0.123333...
  CHECK(raw_moment(u, 2) == doctest::Approx(0.1233).epsilon(1e-3));
  CHECK(raw_moment(u, 4) == doctest::Approx(0.015620).epsilon(1e-9));
  CHECK(raw_moment(u, 4) == doctest::Approx(0.0156).epsilon(1e-2));
  CHECK(raw_moment(DistributionSpec::beta(3, 3), 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(raw_moment(DistributionSpec::gaussian(0, 0.001), 2) ==
        doctest::Approx(0.001).epsilon(1e-12));
  CHECK(raw_moment(u, 0) == 1.0);
}

TEST_CASE("moment recursions agree with adaptive quadrature up to order 12") {
  std::vector<DistributionSpec> dists = {
      DistributionSpec::uniform(0.3, 0.4),  DistributionSpec::uniform(-0.1, 0.1),
      DistributionSpec::gaussian(0, 0.1),   DistributionSpec::gaussian(0.1, 0.001),
      DistributionSpec::beta(3, 3),         DistributionSpec::beta(9, 0.5),
      DistributionSpec::beta(0.5, 2.0)};
  for (const auto& d : dists) {
    for (int alpha = 0; alpha <= 12; ++alpha) {
      double closed = raw_moment(d, alpha);
      double family_scale = 1.0;
      double quad = quadrature_moment(d, alpha, &family_scale);
      // 1e-8 relative; exactly-zero odd moments get an absolute floor tied to
      // the family's natural magnitude at this order.
      double scale = std::max(std::abs(closed), 1e-4 * family_scale);
      INFO(d.describe(), " alpha=", alpha, " closed=", closed, " quad=", quad);
      CHECK(std::abs(closed - quad) / scale < 1e-8);
    }
  }
}

TEST_CASE("expectation reproduces illustrative example 1") {
  Universe u{2, 1, false};
  Polynomial p = parse_polynomial("w1^2 - x1^2 - x2^2", u);
  auto table = MomentTable::build({DistributionSpec::uniform(0.3, 0.4)}, 4);

  Polynomial ep = expectation(p, table);
  CHECK(ep.degree_in(VarKind::Uncertain) == 0);
  CHECK(ep.coefficient(Monomial()) == doctest::Approx(0.1233).epsilon(1e-3));
  CHECK(max_coeff_distance(ep, parse_polynomial("0.12333333333333333 - x1^2 - x2^2", u)) < 1e-9);

  Polynomial ep2 = expectation(p * p, table);
  Polynomial expected = parse_polynomial(
      "0.01562 - 0.24666666666666667*x1^2 - 0.24666666666666667*x2^2"
      " + x1^4 + 2*x1^2*x2^2 + x2^4",
      u);
  CHECK(max_coeff_distance(ep2, expected) < 1e-9);
}

TEST_CASE("expectation of constants and w-free polynomials is identity") {
  Universe u{2, 1, false};
  auto table = MomentTable::build({DistributionSpec::uniform(0, 1)}, 2);
  Polynomial c = Polynomial::constant(3.25, u);
  CHECK(expectation(c, table).constant_value() == 3.25);
  Polynomial p = parse_polynomial("x1^2 - 2*x2", u);
  CHECK(max_coeff_distance(expectation(p, table), p) == 0.0);
  // Idempotent on w-free input.
  CHECK(max_coeff_distance(expectation(expectation(p, table), table), p) == 0.0);
}

TEST_CASE("expectation is linear") {
  Universe u{1, 2, false};
  auto table = MomentTable::build(
      {DistributionSpec::gaussian(0.2, 0.5), DistributionSpec::beta(2, 5)}, 8);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coeff(-2, 2);
  for (int rep = 0; rep < 50; ++rep) {
    Polynomial p = parse_polynomial("w1^3*x1 - w2^2 + x1^2", u) * coeff(rng);
    Polynomial q = parse_polynomial("w1*w2*x1 + 4*w2^4", u) * coeff(rng);
    double a = coeff(rng), b = coeff(rng);
    Polynomial lhs = expectation(p * a + q * b, table);
    Polynomial rhs = expectation(p, table) * a + expectation(q, table) * b;
    CHECK(max_coeff_distance(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("expectation matches Monte Carlo on random polynomials") {
  Universe u{2, 2, false};
  std::vector<DistributionSpec> dists = {DistributionSpec::uniform(0.3, 0.4),
                                         DistributionSpec::beta(3, 3)};
  auto table = MomentTable::build(dists, 8);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> cu(-1, 1);

  // Random degree-4 polynomial in (x, w).
  Polynomial p;
  p.set_universe(u);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; i + j <= 2; ++j)
      for (int k = 0; i + j + k <= 4; ++k)
        for (int l = 0; i + j + k + l <= 4; ++l) {
          std::vector<Monomial::Factor> fs;
          if (i) fs.push_back({VarId::state(0), i});
          if (j) fs.push_back({VarId::state(1), j});
          if (k) fs.push_back({VarId::uncertain(0), k});
          if (l) fs.push_back({VarId::uncertain(1), l});
          p.add_term(Monomial(std::move(fs)), cu(rng));
        }
  p.normalize();
  Polynomial ep = expectation(p, table);

  const int n_samples = 1000000;
  for (int pt = 0; pt < 20; ++pt) {
    Assignment at;
    at.state = {cu(rng), cu(rng)};
    // MC of E_w[p(x, w)] with per-point stream.
    Rng mc = make_stream(1234, pt);
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < n_samples; ++s) {
      Assignment full = at;
      full.uncertain = {sample(dists[0], mc), sample(dists[1], mc)};
      double v = p.eval(full);
      sum += v;
      sumsq += v * v;
    }
    double mean = sum / n_samples;
    double se = std::sqrt(std::max(0.0, sumsq / n_samples - mean * mean) / n_samples);
    double predicted = ep.eval(at);
    INFO("point ", pt, " predicted=", predicted, " mc=", mean, " se=", se);
    CHECK(std::abs(predicted - mean) <= 3 * se + 1e-12);
  }
}

TEST_CASE("expectation throws on insufficient moment order") {
  Universe u{1, 1, false};
  auto table = MomentTable::build({DistributionSpec::uniform(0, 1)}, 3);
  Polynomial p = parse_polynomial("w1^4", u);
  CHECK_THROWS_AS(expectation(p, table), InsufficientMomentOrder);
}

TEST_CASE("sampler support and empirical moments") {
  Rng rng = make_stream(99, 0);
  auto u = DistributionSpec::uniform(0.3, 0.4);
  for (int i = 0; i < 10000; ++i) {
    double v = sample(u, rng);
    CHECK(v >= 0.3);
    CHECK(v <= 0.4);
  }

  // Empirical mean of Beta(3,3) ~ 0.5 +- 0.001 at 1e6 draws.
  auto b = DistributionSpec::beta(3, 3);
  Rng rb = make_stream(99, 1);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += sample(b, rb);
  CHECK(std::abs(sum / n - 0.5) < 0.001);
}

TEST_CASE("empirical moments match raw_moment within 3 standard errors") {
  std::vector<DistributionSpec> dists = {DistributionSpec::uniform(0.3, 0.4),
                                         DistributionSpec::gaussian(0.0, 0.1),
                                         DistributionSpec::beta(3, 3)};
  const int n = 1000000;
  for (size_t di = 0; di < dists.size(); ++di) {
    Rng rng = make_stream(4242, di);
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample(dists[di], rng);
    for (int alpha = 1; alpha <= 6; ++alpha) {
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < n; ++i) {
        double v = ipow(draws[i], alpha);
        sum += v;
        sumsq += v * v;
      }
      double mean = sum / n;
      double se = std::sqrt(std::max(0.0, sumsq / n - mean * mean) / n);
      double expected = raw_moment(dists[di], alpha);
      INFO(dists[di].describe(), " alpha=", alpha);
      CHECK(std::abs(mean - expected) <= 3 * se + 1e-12);
    }
  }
}

TEST_CASE("sampling is deterministic given the seed") {
  auto d = DistributionSpec::gaussian(0.5, 0.25);
  Rng a = make_stream(7, 3), b = make_stream(7, 3);
  for (int i = 0; i < 100; ++i) CHECK(sample(d, a) == sample(d, b));
}

TEST_CASE("cauchy-schwarz: E[p^2] >= E[p]^2 pointwise") {
  Universe u{2, 2, false};
  std::vector<DistributionSpec> dists = {DistributionSpec::uniform(-0.5, 0.5),
                                         DistributionSpec::beta(2, 2)};
  auto table = MomentTable::build(dists, 12);
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> cu(-1, 1);
  for (int rep = 0; rep < 200; ++rep) {
    Polynomial p;
    p.set_universe(u);
    for (int t = 0; t < 6; ++t) {
      std::vector<Monomial::Factor> fs;
      std::uniform_int_distribution<int> e(0, 2);
      int e1 = e(rng), e2 = e(rng), e3 = e(rng), e4 = e(rng);
      if (e1) fs.push_back({VarId::state(0), e1});
      if (e2) fs.push_back({VarId::state(1), e2});
      if (e3) fs.push_back({VarId::uncertain(0), e3});
      if (e4) fs.push_back({VarId::uncertain(1), e4});
      p.add_term(Monomial(std::move(fs)), cu(rng));
    }
    p.normalize();
    Polynomial ep = expectation(p, table);
    Polynomial ep2 = expectation(p * p, table);
    for (int pt = 0; pt < 5; ++pt) {
      Assignment at;
      at.state = {cu(rng), cu(rng)};
      double m = ep.eval(at);
      CHECK(ep2.eval(at) >= m * m - 1e-9);
    }
  }
}

TEST_CASE("distribution parameter validation") {
  CHECK_THROWS_AS(DistributionSpec::uniform(1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(DistributionSpec::gaussian(0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(DistributionSpec::beta(0.0, 1.0), ConfigError);
}
