#include "riskplan/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace riskplan {

std::vector<double> PiecewiseLinearTrajectory::position(double t) const {
  if (pieces.empty()) throw Error("empty trajectory");
  const int s = piece_count();
  double u = (t - t0) / (tf - t0) * s;
  int i = std::clamp(static_cast<int>(u), 0, s - 1);
  std::vector<double> x(pieces[i].a.size());
  for (size_t k = 0; k < x.size(); ++k) x[k] = pieces[i].a[k] + pieces[i].b[k] * t;
  return x;
}

std::vector<Polynomial> PiecewiseLinearTrajectory::piece_polys(int i, const Universe& u) const {
  Universe ut = u;
  ut.has_time = true;
  std::vector<Polynomial> polys;
  Polynomial t = Polynomial::variable(VarId::time(), ut);
  for (size_t k = 0; k < pieces[i].a.size(); ++k)
    polys.push_back(Polynomial::constant(pieces[i].a[k], ut) + t * pieces[i].b[k]);
  return polys;
}

PiecewiseLinearTrajectory PiecewiseLinearTrajectory::from_waypoints(
    const std::vector<std::vector<double>>& pts, double t0, double tf) {
  if (pts.size() < 2) throw Error("need at least two waypoints");
  if (!(t0 < tf)) throw Error("need t0 < tf");
  PiecewiseLinearTrajectory traj;
  traj.t0 = t0;
  traj.tf = tf;
  const int s = static_cast<int>(pts.size()) - 1;
  const double dt = (tf - t0) / s;
  for (int i = 0; i < s; ++i) {
    const double ta = t0 + i * dt;
    Piece p;
    p.b.resize(pts[i].size());
    p.a.resize(pts[i].size());
    for (size_t k = 0; k < pts[i].size(); ++k) {
      p.b[k] = (pts[i + 1][k] - pts[i][k]) / dt;
      p.a[k] = pts[i][k] - p.b[k] * ta;
    }
    traj.pieces.push_back(std::move(p));
  }
  return traj;
}

std::vector<std::vector<double>> PiecewiseLinearTrajectory::waypoints() const {
  std::vector<std::vector<double>> pts;
  pts.push_back(position(t0));
  for (int i = 1; i <= piece_count(); ++i) {
    double t = knot(i);
    // Evaluate the owning piece at its right endpoint for exactness.
    const Piece& p = pieces[i - 1];
    std::vector<double> x(p.a.size());
    for (size_t k = 0; k < x.size(); ++k) x[k] = p.a[k] + p.b[k] * t;
    pts.push_back(std::move(x));
  }
  return pts;
}

std::vector<double> PolynomialTrajectory::position(double t) const {
  std::vector<double> x(coeffs.size(), 0.0);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    double tp = 1.0;
    for (size_t a = 0; a < coeffs[k].size(); ++a) {
      x[k] += coeffs[k][a] * tp;
      tp *= t;
    }
  }
  return x;
}

std::vector<Polynomial> PolynomialTrajectory::as_polys(const Universe& u) const {
  Universe ut = u;
  ut.has_time = true;
  std::vector<Polynomial> polys;
  for (const auto& cs : coeffs) {
    Polynomial p;
    p.set_universe(ut);
    for (size_t a = 0; a < cs.size(); ++a) {
      if (a == 0)
        p.add_term(Monomial(), cs[a]);
      else
        p.add_term(Monomial({{VarId::time(), static_cast<int>(a)}}), cs[a]);
    }
    p.normalize();
    polys.push_back(std::move(p));
  }
  return polys;
}

double trajectory_length(const PiecewiseLinearTrajectory& traj) {
  const double dt = (traj.tf - traj.t0) / traj.piece_count();
  double total = 0.0;
  for (const auto& p : traj.pieces) {
    double b2 = 0.0;
    for (double b : p.b) b2 += b * b;
    total += b2 * dt;
  }
  return total;
}

double trajectory_length(const PolynomialTrajectory& traj) {
  Universe u{0, 0, true};
  double total = 0.0;
  for (const auto& poly : traj.as_polys(u)) {
    Polynomial d = poly.derivative(VarId::time());
    total += integrate_univariate(d * d, traj.t0, traj.tf);
  }
  return total;
}

double integrate_univariate(const Polynomial& p, double a, double b) {
  double total = 0.0;
  for (const auto& [m, c] : p.terms()) {
    int e = m.exponent_of(VarId::time());
    if (m.total_degree() != e) throw Error("integrate_univariate: polynomial not univariate in t");
    total += c * (ipow(b, e + 1) - ipow(a, e + 1)) / (e + 1);
  }
  return total;
}

}  // namespace riskplan
