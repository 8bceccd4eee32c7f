#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "riskplan/oracle.hpp"
#include "riskplan/scenario.hpp"

namespace riskplan {

// Trajectory JSON: {kind, pieces:[{a, b, t0, t1}], length, certified} or the
// polynomial form {kind, coeffs, t0, tf, ...}. Round-trips exactly.
nlohmann::json trajectory_to_json(const PiecewiseLinearTrajectory& traj, bool certified);
nlohmann::json trajectory_to_json(const PolynomialTrajectory& traj, bool certified);

struct LoadedTrajectory {
  std::optional<PiecewiseLinearTrajectory> piecewise;
  std::optional<PolynomialTrajectory> polynomial;
  double t0() const;
  double tf() const;
  std::vector<double> position(double t) const;
  // Per-dimension polynomials of the piece covering [piece_t1, piece_t2].
  int piece_count() const;
  std::vector<Polynomial> piece_polys(int i, const Universe& u) const;
  double piece_t1(int i) const;
  double piece_t2(int i) const;
};
LoadedTrajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json tube_to_json(const Tube& tube, const std::string& center_trajectory_ref);
Tube tube_from_json(const nlohmann::json& j, const Universe& u);

nlohmann::json certificate_to_json(const Certificate& cert, bool include_grams = false);
nlohmann::json verify_report_to_json(const VerifyReport& report, bool include_grams = false);
nlohmann::json risk_estimate_to_json(const RiskEstimate& e);
nlohmann::json trajectory_risk_to_json(const TrajectoryRiskReport& r);
nlohmann::json tube_risk_to_json(const TubeRiskReport& r);

std::string tree_to_csv(const SearchTree& tree);

// Minimal standalone SVG: contour membership cells, trajectory polyline, tube
// circles at sampled times. 2D scenarios only; CSV stays the canonical output.
std::string svg_render(const Scenario& scenario, const FreeSpace& free,
                       const PiecewiseLinearTrajectory* traj, const Tube* tube,
                       int grid_resolution = 101);

// Run report skeleton; the CLI fills outputs/timings and writes it to disk.
nlohmann::json make_run_report(const std::string& command, const Scenario& scenario);

void write_text_file(const std::string& path, const std::string& content);
std::string version_string();

}  // namespace riskplan
