#include "riskplan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "riskplan/poly_io.hpp"

namespace riskplan {

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool Scenario::has_dynamic() const {
  for (const auto& o : obstacles)
    if (o.kind == Obstacle::Kind::Dynamic) return true;
  return false;
}

MomentTable Scenario::moments() const {
  std::vector<int> orders(dists.size(), 0);
  for (const auto& o : obstacles)
    for (size_t w = 0; w < dists.size(); ++w)
      orders[w] = std::max(orders[w],
                           2 * o.body.max_exponent(VarId::uncertain(static_cast<int>(w))));
  return MomentTable::build(dists, orders);
}

FreeSpace Scenario::free_space(double delta_override) const {
  FreeSpace fs;
  fs.workspace = workspace;
  MomentTable table = moments();
  for (const auto& o : obstacles) fs.contours.push_back(build_contour(o, delta_override, table));
  return fs;
}

PlanRequest Scenario::plan_request() const { return plan_request(free_space()); }

PlanRequest Scenario::plan_request(const FreeSpace& fs) const {
  PlanRequest req;
  req.free = fs;
  req.obstacles = obstacles;
  req.dists = dists;
  req.universe = universe();
  req.start = start;
  req.goal = goal;
  req.t0 = t0;
  req.tf = tf;
  req.delta = delta;
  req.config = planner;
  req.config.seed = seed;
  return req;
}

namespace {

DistributionSpec dist_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return DistributionSpec::uniform(j.at("l"), j.at("u"));
  if (kind == "gaussian") return DistributionSpec::gaussian(j.at("mu"), j.at("var"));
  if (kind == "beta") return DistributionSpec::beta(j.at("a"), j.at("b"));
  throw ParseError("unknown distribution kind '" + kind + "'", 0);
}

std::vector<double> vec_from_json(const nlohmann::json& j, size_t expect,
                                  const std::string& field) {
  std::vector<double> v = j.get<std::vector<double>>();
  if (v.size() != expect)
    throw ParseError("field '" + field + "' needs " + std::to_string(expect) + " entries", 0);
  return v;
}

RadiusProfile profile_from_json(const nlohmann::json& j) {
  RadiusProfile p;
  const std::string kind = j.value("profile", "constant");
  if (kind == "constant")
    p.kind = RadiusProfile::Kind::Constant;
  else if (kind == "linear")
    p.kind = RadiusProfile::Kind::Linear;
  else if (kind == "quadratic")
    p.kind = RadiusProfile::Kind::Quadratic;
  else
    throw ParseError("unknown tube profile '" + kind + "'", 0);
  p.a = j.value("a", 0.5);
  p.b = j.value("b", 0.5);
  p.decreasing = j.value("decreasing", false);
  return p;
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j, const std::string& source_name) {
  Scenario s;
  s.name = j.value("name", source_name);

  const int version = j.value("schema_version", -1);
  if (version != kSchemaVersion)
    throw SchemaVersionMismatch("scenario schema_version " + std::to_string(version) +
                                " != supported " + std::to_string(kSchemaVersion));

  s.state_dim = j.at("state_dim").get<int>();
  if (s.state_dim != 2 && s.state_dim != 3)
    throw ParseError("state_dim must be 2 or 3", 0);

  const auto& ws = j.at("workspace");
  s.workspace.lo = vec_from_json(ws.at("lo"), s.state_dim, "workspace.lo");
  s.workspace.hi = vec_from_json(ws.at("hi"), s.state_dim, "workspace.hi");
  for (int k = 0; k < s.state_dim; ++k)
    if (!(s.workspace.lo[k] < s.workspace.hi[k]))
      throw ParseError("workspace box must have lo < hi per axis", 0);

  if (j.contains("uncertain")) {
    int expected = 1;
    for (const auto& w : j.at("uncertain")) {
      const std::string name = w.at("name").get<std::string>();
      if (name != "w" + std::to_string(expected))
        throw ParseError("uncertain variables must be declared in order w1, w2, ...", 0);
      ++expected;
      s.omega_names.push_back(name);
      s.dists.push_back(dist_from_json(w.at("dist")));
    }
  }

  Universe u = s.universe();
  for (const auto& jo : j.at("obstacles")) {
    const std::string name = jo.at("name").get<std::string>();
    const std::string body = jo.at("body").get<std::string>();
    Obstacle o = Obstacle::make(name, parse_polynomial(body, u));
    if (jo.contains("kind")) {
      const std::string kind = jo.at("kind").get<std::string>();
      if (kind != "static" && kind != "dynamic") throw ParseError("obstacle kind?", 0);
      bool declared_dynamic = kind == "dynamic";
      if (!declared_dynamic && o.kind == Obstacle::Kind::Dynamic)
        throw ParseError("obstacle '" + name + "' declared static but mentions t", 0);
      o.kind = declared_dynamic ? Obstacle::Kind::Dynamic : Obstacle::Kind::Static;
    }
    s.obstacles.push_back(std::move(o));
  }

  s.delta = j.at("delta").get<double>();
  if (!(s.delta >= 0.0 && s.delta <= 1.0)) throw ParseError("delta must lie in [0,1]", 0);

  s.start = vec_from_json(j.at("start"), s.state_dim, "start");
  s.goal = vec_from_json(j.at("goal"), s.state_dim, "goal");
  if (s.start == s.goal) throw ParseError("start and goal must differ", 0);

  const auto& hz = j.at("horizon");
  s.t0 = hz.at("t0").get<double>();
  s.tf = hz.at("tf").get<double>();
  if (!(s.t0 < s.tf)) throw ParseError("horizon needs t0 < tf", 0);

  s.seed = j.value("seed", 1);

  if (j.contains("planner")) {
    const auto& p = j.at("planner");
    s.planner.max_iterations = p.value("max_iterations", s.planner.max_iterations);
    s.planner.step_frac = p.value("step_frac", s.planner.step_frac);
    s.planner.goal_bias = p.value("goal_bias", s.planner.goal_bias);
    s.planner.init_line = p.value("init_line", s.planner.init_line);
    s.planner.pieces = p.value("pieces", s.planner.pieces);
  }
  if (j.contains("tube")) {
    const auto& t = j.at("tube");
    if (!t.contains("c_max"))
      throw ParseError("tube block requires c_max", 0);
    s.tube.c_max = t.at("c_max").get<double>();
    s.tube.eps = t.value("eps", s.tube.eps);
    s.tube.r_min = t.value("r_min", s.tube.r_min);
    s.tube.w = t.value("w", s.tube.w);
    s.tube.profile = profile_from_json(t);
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    s.oracle.n_omega = o.value("n_omega", s.oracle.n_omega);
    s.oracle.n_t = o.value("n_t", s.oracle.n_t);
    s.oracle.n_x = o.value("n_x", s.oracle.n_x);
  }
  return s;
}

Scenario load_scenario(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw ParseError("cannot open scenario file '" + file_path + "'", 0);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what(), e.byte);
  }
  Scenario s;
  try {
    s = scenario_from_json(j, file_path);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what(), 0);
  }
  s.path = file_path;
  s.content_hash = fnv1a64(text);
  return s;
}

}  // namespace riskplan
