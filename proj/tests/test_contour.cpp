#include <doctest.h>

#include <random>

#include "riskplan/contour.hpp"
#include "riskplan/poly_io.hpp"

using namespace riskplan;

namespace {

const Universe kU1{2, 1, false};

Obstacle example1_obstacle() {
  return Obstacle::make("disc", parse_polynomial("w1^2 - x1^2 - x2^2", kU1));
}

MomentTable example1_moments() {
  return MomentTable::build({DistributionSpec::uniform(0.3, 0.4)}, 4);
}

}  // namespace

TEST_CASE("build_contour reproduces example 1 polynomials") {
  auto c = build_contour(example1_obstacle(), 0.1, example1_moments());
  CHECK_FALSE(c.time_varying);
  CHECK(max_coeff_distance(c.mean_poly,
                           parse_polynomial("0.12333333333333333 - x1^2 - x2^2", kU1)) < 1e-9);
  CHECK(max_coeff_distance(
            c.sq_mean_poly,
            parse_polynomial("0.01562 - 0.24666666666666667*x1^2 - 0.24666666666666667*x2^2"
                             " + x1^4 + 2*x1^2*x2^2 + x2^4",
                             kU1)) < 1e-9);
  // Structural identity: cantelli + E[P]^2 - (1-Delta) E[P^2] == 0.
  Polynomial zero =
      c.cantelli_poly + c.mean_poly * c.mean_poly - c.sq_mean_poly * (1.0 - c.delta);
  CHECK(zero.is_zero());
}

TEST_CASE("delta = 1 collapses the cantelli condition") {
  auto c = build_contour(example1_obstacle(), 1.0, example1_moments());
  Polynomial expected = -(c.mean_poly * c.mean_poly);
  CHECK(max_coeff_distance(c.cantelli_poly, expected) < 1e-12);
  // Membership reduces to mean_poly <= 0.
  CHECK(c.contains({0.5, 0.5}));
  CHECK_FALSE(c.contains({0.1, 0.1}));
}

TEST_CASE("deterministic obstacle: contour is the exact complement") {
  Universe u{2, 0, false};
  Obstacle o = Obstacle::make("det", parse_polynomial("0.25 - x1^2 - x2^2", u));
  auto table = MomentTable::build({}, 0);
  auto c = build_contour(o, 0.3, table);
  Polynomial p = o.body;
  CHECK(max_coeff_distance(c.cantelli_poly, -(p * p) * 0.3) < 1e-12);
  // Membership iff P(x) <= 0, i.e. outside the open obstacle.
  CHECK(c.contains({0.6, 0.0}));
  CHECK(c.contains({0.5, 0.0}));  // boundary is a member
  CHECK_FALSE(c.contains({0.4, 0.0}));
}

TEST_CASE("membership at spec points") {
  auto c = build_contour(example1_obstacle(), 0.1, example1_moments());
  CHECK(c.contains({1.0, 1.0}));
  CHECK_FALSE(c.contains({0.0, 0.0}));  // mean_poly(0,0) = 0.1233 > 0
}

TEST_CASE("membership requires time iff time varying") {
  Universe u{2, 1, true};
  Obstacle o = Obstacle::make("mov", parse_polynomial("w1^2 - (x1-t)^2 - x2^2", u));
  CHECK(o.kind == Obstacle::Kind::Dynamic);
  auto c = build_contour(o, 0.1, example1_moments());
  CHECK(c.time_varying);
  CHECK_THROWS_AS(c.contains({1.0, 1.0}), MissingTime);
  CHECK(c.contains({-1.0, 0.0}, 1.0));
}

TEST_CASE("grid export shapes and trivial memberships") {
  Universe u{2, 0, false};
  Obstacle empty = Obstacle::make("none", parse_polynomial("-1", u));
  auto c = build_contour(empty, 1.0, MomentTable::build({}, 0));
  auto g = grid_export(c, {0, 0}, {1, 1}, 2);
  CHECK(g.points.size() == 4);
  for (bool m : g.member) CHECK(m);

  auto g2 = grid_export(build_contour(example1_obstacle(), 0.1, example1_moments()), {-1, -1},
                        {1, 1}, 21);
  CHECK(g2.points.size() == 21 * 21);
  CHECK_THROWS_AS(grid_export(c, {0, 0}, {1, 1}, 1), ConfigError);
}

TEST_CASE("grid export: members exclude the disc and include the corner") {
  auto c = build_contour(example1_obstacle(), 0.1, example1_moments());
  auto g = grid_export(c, {-1, -1}, {1, 1}, 201);
  size_t n_member = 0;
  for (size_t i = 0; i < g.points.size(); ++i) {
    double r = std::hypot(g.points[i][0], g.points[i][1]);
    if (r <= 0.4 && g.member[i]) FAIL("grid point inside the max obstacle marked member");
    if (g.member[i]) ++n_member;
    if (std::abs(g.points[i][0] - 1) < 1e-12 && std::abs(g.points[i][1] - 1) < 1e-12)
      CHECK(g.member[i]);
  }
  CHECK(n_member > 0);
}

TEST_CASE("monotonicity in delta on a grid") {
  auto obs = example1_obstacle();
  auto moments = example1_moments();
  std::vector<double> deltas = {0.05, 0.1, 0.2, 0.5, 1.0};
  std::vector<ContourGrid> grids;
  for (double d : deltas)
    grids.push_back(grid_export(build_contour(obs, d, moments), {-1, -1}, {1, 1}, 101));
  for (size_t k = 0; k + 1 < grids.size(); ++k)
    for (size_t i = 0; i < grids[k].member.size(); ++i)
      if (grids[k].member[i]) CHECK(grids[k + 1].member[i]);
}

TEST_CASE("cantelli ratio lies in [0,1] where defined") {
  auto c = build_contour(example1_obstacle(), 0.37, example1_moments());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int rep = 0; rep < 1000; ++rep) {
    Assignment at;
    at.state = {d(rng), d(rng)};
    double m = c.mean_poly.eval(at);
    double s = c.sq_mean_poly.eval(at);
    if (m <= 0 && s > 1e-12) {
      double ratio = (s - m * m) / s;
      CHECK(ratio >= -1e-9);
      CHECK(ratio <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("freespace membership includes the workspace box") {
  FreeSpace fs;
  fs.workspace = Box{{-1, -1}, {1, 1}};
  fs.contours.push_back(build_contour(example1_obstacle(), 0.1, example1_moments()));
  CHECK(fs.contains({0.9, 0.9}));
  CHECK_FALSE(fs.contains({1.5, 0.0}));
  CHECK_FALSE(fs.contains({0.0, 0.0}));
  auto gs = fs.constraint_polys(kU1);
  auto labels = fs.constraint_labels();
  CHECK(gs.size() == 6);  // 2 contour + 4 box sides
  CHECK(gs.size() == labels.size());
}

TEST_CASE("csv export emits header and one row per cell") {
  auto c = build_contour(example1_obstacle(), 0.1, example1_moments());
  auto g = grid_export(c, {-1, -1}, {1, 1}, 3);
  std::string csv = g.to_csv();
  CHECK(csv.substr(0, csv.find('\n')) == "x1,x2,member,cantelli,mean");
  size_t rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + 9);
}

TEST_CASE("insufficient moment order is reported") {
  auto table2 = MomentTable::build({DistributionSpec::uniform(0.3, 0.4)}, 2);
  CHECK_THROWS_AS(build_contour(example1_obstacle(), 0.1, table2), InsufficientMomentOrder);
  CHECK_THROWS_AS(build_contour(example1_obstacle(), 1.5, example1_moments()), ConfigError);
}
