#include "riskplan/contour.hpp"

#include <cmath>
#include <sstream>

#include "riskplan/kernels.hpp"
#include "riskplan/poly_io.hpp"

namespace riskplan {

Obstacle Obstacle::make(std::string name, Polynomial body) {
  Obstacle o;
  o.name = std::move(name);
  o.kind = body.degree_in(VarKind::Time) > 0 ? Kind::Dynamic : Kind::Static;
  o.body = std::move(body);
  return o;
}

RiskContour build_contour(const Obstacle& obs, double delta, const MomentTable& moments) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("risk level must be in [0,1]");
  RiskContour c;
  c.obstacle_name = obs.name;
  c.delta = delta;
  c.time_varying = obs.kind == Obstacle::Kind::Dynamic;
  c.mean_poly = expectation(obs.body, moments);
  c.sq_mean_poly = expectation(obs.body * obs.body, moments);
  c.cantelli_poly = c.sq_mean_poly * (1.0 - delta) - c.mean_poly * c.mean_poly;
  return c;
}

bool RiskContour::contains(const std::vector<double>& x, std::optional<double> t) const {
  if (time_varying && !t) throw MissingTime("time-varying contour needs a time");
  Assignment at;
  at.state = x;
  at.time = t;
  // Boundary counts as inside: the risk bound is non-strict.
  return cantelli_poly.eval(at) <= 0.0 && mean_poly.eval(at) <= 0.0;
}

bool Box::contains(const std::vector<double>& x) const {
  for (size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double Box::diagonal() const {
  double s = 0.0;
  for (size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(s);
}

bool FreeSpace::contains(const std::vector<double>& x, std::optional<double> t) const {
  if (!workspace.contains(x)) return false;
  for (const auto& c : contours)
    if (!c.contains(x, c.time_varying ? t : std::nullopt)) return false;
  return true;
}

std::vector<Polynomial> FreeSpace::constraint_polys(const Universe& u) const {
  std::vector<Polynomial> gs;
  for (const auto& c : contours) {
    gs.push_back(-c.cantelli_poly);
    gs.push_back(-c.mean_poly);
  }
  for (int k = 0; k < workspace.dim(); ++k) {
    Polynomial xk = Polynomial::variable(VarId::state(k), u);
    gs.push_back(xk - Polynomial::constant(workspace.lo[k], u));
    gs.push_back(Polynomial::constant(workspace.hi[k], u) - xk);
  }
  return gs;
}

std::vector<std::string> FreeSpace::constraint_labels() const {
  std::vector<std::string> labels;
  for (const auto& c : contours) {
    labels.push_back(c.obstacle_name + ":cantelli");
    labels.push_back(c.obstacle_name + ":mean");
  }
  for (int k = 0; k < workspace.dim(); ++k) {
    labels.push_back("box:x" + std::to_string(k + 1) + ">=lo");
    labels.push_back("box:x" + std::to_string(k + 1) + "<=hi");
  }
  return labels;
}

ContourGrid grid_export(const RiskContour& c, const std::vector<double>& lo,
                        const std::vector<double>& hi, int resolution, std::optional<double> t) {
  if (resolution < 2) throw ConfigError("grid resolution must be >= 2 per axis");
  if (lo.size() != hi.size() || (lo.size() != 2 && lo.size() != 3))
    throw ConfigError("grid bounds must be 2D or 3D");
  if (c.time_varying && !t) throw MissingTime("time-varying contour needs a time for export");

  ContourGrid g;
  g.dim = static_cast<int>(lo.size());
  g.lo = lo;
  g.hi = hi;
  g.resolution = resolution;
  g.t = c.time_varying ? t : std::nullopt;

  size_t n = 1;
  for (int d = 0; d < g.dim; ++d) n *= resolution;

  // SoA coordinates; the time column (when present) is constant.
  std::vector<std::vector<double>> coords(g.dim, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    size_t rem = i;
    for (int d = g.dim - 1; d >= 0; --d) {
      size_t idx = rem % resolution;
      rem /= resolution;
      coords[d][i] = lo[d] + (hi[d] - lo[d]) * static_cast<double>(idx) / (resolution - 1);
    }
  }

  std::vector<VarId> order;
  for (int d = 0; d < g.dim; ++d) order.push_back(VarId::state(d));
  std::vector<const double*> inputs;
  for (int d = 0; d < g.dim; ++d) inputs.push_back(coords[d].data());
  std::vector<double> tcol;
  if (g.t) {
    order.push_back(VarId::time());
    tcol.assign(n, *g.t);
    inputs.push_back(tcol.data());
  }

  g.cantelli_value.resize(n);
  g.mean_value.resize(n);
  auto cc = kernels::CompiledPoly::compile(c.cantelli_poly, order);
  auto cm = kernels::CompiledPoly::compile(c.mean_poly, order);
  kernels::eval_batch(cc, inputs.data(), n, g.cantelli_value.data());
  kernels::eval_batch(cm, inputs.data(), n, g.mean_value.data());

  g.member.resize(n);
  for (size_t i = 0; i < n; ++i)
    g.member[i] = g.cantelli_value[i] <= 0.0 && g.mean_value[i] <= 0.0;

  g.points.resize(n);
  for (size_t i = 0; i < n; ++i) {
    g.points[i].resize(g.dim);
    for (int d = 0; d < g.dim; ++d) g.points[i][d] = coords[d][i];
  }
  return g;
}

std::string ContourGrid::to_csv() const {
  std::ostringstream os;
  os << "x1,x2";
  if (dim == 3) os << ",x3";
  if (t) os << ",t";
  os << ",member,cantelli,mean\n";
  for (size_t i = 0; i < points.size(); ++i) {
    for (int d = 0; d < dim; ++d) os << format_double(points[i][d]) << ",";
    if (t) os << format_double(*t) << ",";
    os << (member[i] ? 1 : 0) << "," << format_double(cantelli_value[i]) << ","
       << format_double(mean_value[i]) << "\n";
  }
  return os.str();
}

}  // namespace riskplan
