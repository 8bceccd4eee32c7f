#pragma once

#include <vector>

#include "riskplan/poly.hpp"

namespace riskplan {

// Piecewise-linear trajectory x_i(t) = a_i + b_i t on uniform intervals
// [t_{i-1}, t_i] of [t0, tf], continuous at the knots.
struct PiecewiseLinearTrajectory {
  struct Piece {
    std::vector<double> a, b;  // x(t) = a + b t, global time
  };
  std::vector<Piece> pieces;
  double t0 = 0.0, tf = 1.0;

  int dim() const { return pieces.empty() ? 0 : static_cast<int>(pieces[0].a.size()); }
  int piece_count() const { return static_cast<int>(pieces.size()); }
  double knot(int i) const { return t0 + (tf - t0) * i / piece_count(); }

  std::vector<double> position(double t) const;
  std::vector<double> start() const { return position(t0); }
  std::vector<double> goal() const { return position(tf); }

  // Per-dimension polynomials in t for piece i.
  std::vector<Polynomial> piece_polys(int i, const Universe& u) const;

  // Uniform-interval trajectory through the given waypoints.
  static PiecewiseLinearTrajectory from_waypoints(const std::vector<std::vector<double>>& pts,
                                                  double t0, double tf);
  std::vector<std::vector<double>> waypoints() const;
};

// x(t) = sum_alpha c_alpha t^alpha per dimension.
struct PolynomialTrajectory {
  std::vector<std::vector<double>> coeffs;  // [dim][alpha]
  double t0 = 0.0, tf = 1.0;

  int dim() const { return static_cast<int>(coeffs.size()); }
  std::vector<double> position(double t) const;
  std::vector<Polynomial> as_polys(const Universe& u) const;
};

// Integral of ||x'(t)||^2 over the horizon (the planning objective).
double trajectory_length(const PiecewiseLinearTrajectory& traj);
double trajectory_length(const PolynomialTrajectory& traj);

// Exact integral of a univariate polynomial in t over [a, b].
double integrate_univariate(const Polynomial& p, double a, double b);

}  // namespace riskplan
