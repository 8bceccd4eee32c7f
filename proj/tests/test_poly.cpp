#include <doctest.h>

#include <random>

#include "riskplan/poly.hpp"
#include "riskplan/poly_io.hpp"

using namespace riskplan;

namespace {

const Universe kU{2, 1, true};  // x1, x2, w1, t

Polynomial P(const std::string& s) { return parse_polynomial(s, kU); }

// Random polynomial with integer coefficients (exact float arithmetic for
// small degrees), up to max_deg, over x1, x2, w1.
Polynomial random_int_poly(std::mt19937_64& rng, int max_deg, int n_terms) {
  std::uniform_int_distribution<int> coeff(-8, 8);
  std::uniform_int_distribution<int> deg(0, max_deg);
  Polynomial p;
  p.set_universe(kU);
  for (int i = 0; i < n_terms; ++i) {
    int d = deg(rng);
    std::vector<Monomial::Factor> fs;
    std::uniform_int_distribution<int> pick(0, 2);
    for (int rem = d; rem > 0;) {
      int v = pick(rng);
      std::uniform_int_distribution<int> e(1, rem);
      int ex = e(rng);
      VarId var = v == 0 ? VarId::state(0) : (v == 1 ? VarId::state(1) : VarId::uncertain(0));
      fs.push_back({var, ex});
      rem -= ex;
    }
    int c = coeff(rng);
    if (c != 0) p.add_term(Monomial(std::move(fs)), c);
  }
  p.normalize();
  return p;
}

Polynomial random_real_poly(std::mt19937_64& rng, int max_deg, int n_terms) {
  Polynomial p = random_int_poly(rng, max_deg, n_terms);
  std::uniform_real_distribution<double> scale(-1.5, 1.5);
  Polynomial r;
  r.set_universe(p.universe());
  for (const auto& [m, c] : p.terms()) r.add_term(m, c * scale(rng));
  r.normalize();
  return r;
}

Assignment random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Assignment a;
  a.state = {u(rng), u(rng)};
  a.uncertain = {u(rng)};
  a.time = u(rng);
  return a;
}

}  // namespace

TEST_CASE("add: identities and cancellation") {
  Polynomial p = P("w1^2 - x1^2");
  CHECK(p + Polynomial::constant(0.0, kU) == p);
  CHECK((P("x1^2") + P("-x1^2")).is_zero());
  CHECK(P("w1^2 - x1^2") + P("-x2^2") == P("w1^2 - x1^2 - x2^2"));
}

TEST_CASE("mul: example 1 square and identities") {
  Polynomial p = P("w1^2 - x1^2 - x2^2");
  Polynomial sq = p * p;
  CHECK(sq == P("w1^4 - 2*w1^2*x1^2 - 2*w1^2*x2^2 + x1^4 + 2*x1^2*x2^2 + x2^4"));
  CHECK(p * Polynomial::constant(1.0, kU) == p);
  CHECK(P("t") * P("t") == P("t^2"));
}

TEST_CASE("substitute: direct expansion and empty binding") {
  Polynomial p = P("w1^2 - x1^2 - x2^2");
  std::map<VarId, Polynomial> b;
  b[VarId::state(0)] = P("t");
  b[VarId::state(1)] = P("1 - t");
  CHECK(p.substitute(b) == P("w1^2 - t^2 - (1-t)^2"));
  CHECK(p.substitute({}) == p);
}

TEST_CASE("substitute/eval commutation on random instances") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    Polynomial p = random_real_poly(rng, 4, 6);
    std::map<VarId, Polynomial> b;
    b[VarId::state(0)] = random_real_poly(rng, 2, 3);
    b[VarId::state(1)] = random_real_poly(rng, 2, 3);
    Polynomial comp = p.substitute(b);
    Assignment at = random_point(rng);
    Assignment pushed = at;
    pushed.state[0] = b[VarId::state(0)].eval(at);
    pushed.state[1] = b[VarId::state(1)].eval(at);
    double lhs = comp.eval(at);
    double rhs = p.eval(pushed);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("eval: spec examples") {
  Assignment at;
  at.state = {0.0, 0.0};
  at.uncertain = {0.35};
  CHECK(P("w1^2 - x1^2 - x2^2").eval(at) == doctest::Approx(0.1225).epsilon(1e-12));
  CHECK(Polynomial::constant(7.0, kU).eval({}) == 7.0);
  CHECK_THROWS_AS(P("x1 + w1").eval(Assignment{{0.5}, {}, {}}), MissingVariable);
}

TEST_CASE("derivative: formal rules and finite differences") {
  CHECK(P("2 + 3*t").derivative(VarId::time()) == P("3"));
  CHECK(P("t^2").derivative(VarId::time()) == P("2*t"));

  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    Polynomial p = random_real_poly(rng, 4, 6);
    Polynomial dp = p.derivative(VarId::state(0));
    Assignment at = random_point(rng);
    const double h = 1e-6;
    Assignment hi = at, lo = at;
    hi.state[0] += h;
    lo.state[0] -= h;
    double fd = (p.eval(hi) - p.eval(lo)) / (2 * h);
    double an = dp.eval(at);
    double scale = std::max({1.0, std::abs(fd), std::abs(an)});
    CHECK(std::abs(fd - an) / scale < 1e-4);
  }
}

TEST_CASE("ring axioms on randomized integer polynomials") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    Polynomial a = random_int_poly(rng, 3, 4);
    Polynomial b = random_int_poly(rng, 3, 4);
    Polynomial c = random_int_poly(rng, 3, 4);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("degree of product adds for nonzero polynomials") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    Polynomial a = random_int_poly(rng, 3, 4);
    Polynomial b = random_int_poly(rng, 3, 4);
    if (a.is_zero() || b.is_zero()) continue;
    CHECK((a * b).degree() == a.degree() + b.degree());
  }
}

TEST_CASE("canonical ordering is deterministic") {
  Polynomial p = P("1 + t + w1 + x2 + x1 + x1*x2 + t^2");
  CHECK(to_string(p) == "x1*x2 + t^2 + x1 + x2 + w1 + t + 1");
}

TEST_CASE("text round trip is bit exact") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 50; ++rep) {
    Polynomial p = random_real_poly(rng, 4, 8);
    CHECK(parse_polynomial(to_string(p), kU) == p);
  }
  CHECK(to_string(Polynomial{}) == "0");
  CHECK(parse_polynomial("0", kU).is_zero());
}

TEST_CASE("json round trip is bit exact") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    Polynomial p = random_real_poly(rng, 4, 8);
    CHECK(poly_from_json(poly_to_json(p)) == p);
  }
}

TEST_CASE("parser rejects malformed input and unknown variables") {
  CHECK_THROWS_AS(P("x1 +"), ParseError);
  CHECK_THROWS_AS(P("x1 ^ x2"), ParseError);
  CHECK_THROWS_AS(P("y1 + 2"), ParseError);
  CHECK_THROWS_AS(P("x3"), UndeclaredVariable);
  CHECK_THROWS_AS(P("w2"), UndeclaredVariable);
  CHECK_THROWS_AS(parse_polynomial("t", Universe{1, 0, false}), UndeclaredVariable);
}

TEST_CASE("scrub removes numerically zero terms") {
  Polynomial a = P("x1^2") * 1e-15;
  CHECK(a.is_zero());
  Polynomial b = P("x1^2 + x2") - P("x1^2");
  CHECK(b == P("x2"));
}
