#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riskplan/dist.hpp"
#include "riskplan/poly.hpp"

namespace riskplan {

// Uncertain obstacle {x : body(x, w [, t]) >= 0}.
struct Obstacle {
  enum class Kind { Static, Dynamic };
  std::string name;
  Polynomial body;
  Kind kind = Kind::Static;

  static Obstacle make(std::string name, Polynomial body);  // kind from body's time usage
};

// Deterministic inner approximation of the Delta-risk contour:
//   member(x[,t])  <=>  cantelli_poly <= 0  and  mean_poly <= 0
// with mean_poly = E[P] and cantelli_poly = (1-Delta) E[P^2] - E[P]^2 in
// cleared polynomial form (E[P^2] >= 0 pointwise, so clearing the denominator
// preserves the inequality).
struct RiskContour {
  std::string obstacle_name;
  double delta = 0.0;
  Polynomial mean_poly;      // E[P]
  Polynomial sq_mean_poly;   // E[P^2]
  Polynomial cantelli_poly;  // (1-Delta) E[P^2] - E[P]^2
  bool time_varying = false;

  bool contains(const std::vector<double>& x, std::optional<double> t = std::nullopt) const;
};

RiskContour build_contour(const Obstacle& obs, double delta, const MomentTable& moments);

// Axis-aligned workspace box.
struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const std::vector<double>& x) const;
  double diagonal() const;
};

// The risk-bounded free space: one contour per obstacle plus the workspace box.
struct FreeSpace {
  std::vector<RiskContour> contours;
  Box workspace;

  bool contains(const std::vector<double>& x, std::optional<double> t = std::nullopt) const;

  // Constraint polynomials g(x[,t]) >= 0 describing the free space: per contour
  // -cantelli_poly and -mean_poly, then the box sides. Labels parallel the list.
  std::vector<Polynomial> constraint_polys(const Universe& u) const;
  std::vector<std::string> constraint_labels() const;
};

// Row-major membership/diagnostic grid over a box, for CSV/SVG export.
struct ContourGrid {
  int dim = 2;
  std::vector<double> lo, hi;
  int resolution = 0;  // per axis
  std::optional<double> t;
  // resolution^dim rows, inner axis fastest.
  std::vector<std::vector<double>> points;
  std::vector<bool> member;
  std::vector<double> cantelli_value;
  std::vector<double> mean_value;

  std::string to_csv() const;
};

ContourGrid grid_export(const RiskContour& c, const std::vector<double>& lo,
                        const std::vector<double>& hi, int resolution,
                        std::optional<double> t = std::nullopt);

}  // namespace riskplan
