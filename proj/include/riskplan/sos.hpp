#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskplan/poly.hpp"

namespace riskplan {

// Monomial basis z of one SOS multiplier sigma = z^T Q z, Q >= 0.
struct GramBasis {
  std::vector<Monomial> monos;
  int size() const { return static_cast<int>(monos.size()); }
};

struct SosMultiplier {
  std::string name;    // "sigma0", ...
  Polynomial weight;   // w_j multiplying the SOS term in the identity
  GramBasis basis;
};

// Feasibility problem: find PSD Gram blocks Q_j with
//   sum_j z_j^T Q_j z_j * w_j(vars)  ==  target(vars)   (coefficient-wise)
// flattened to the linear system A q = b over stacked svec(Q_j).
// Off-diagonal svec entries carry the usual sqrt(2) scaling, so q is an
// isometric image of the blocks.
struct SosProgram {
  Polynomial target;                   // normalized: divided by `scale`
  double scale = 1.0;                  // original g = scale * target
  std::vector<SosMultiplier> sigmas;   // sigma0 first, weight 1

  std::vector<int> block_dims;
  std::vector<int> block_offsets;      // svec offset of each block in q
  int n_cols = 0;

  std::vector<Monomial> row_monomials;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  // True when some target monomial cannot be produced by any Gram entry at
  // these degrees; such programs are infeasible as assembled.
  bool structurally_infeasible = false;
  std::string structural_note;

  // Expands sum_j (z^T Q_j z) w_j for given blocks (for reconstruction checks).
  Polynomial reconstruct(const std::vector<Eigen::MatrixXd>& grams) const;
};

// Builds the linear system for the given target and multipliers.
SosProgram build_sos_program(const Polynomial& target, std::vector<SosMultiplier> sigmas);

// All monomials in the given variables with total degree <= max_deg.
std::vector<Monomial> monomials_up_to(const std::vector<VarId>& vars, int max_deg);

// Putinar form on an interval for univariate g(t), t in [t1, t2], normalized to
// s in [0,1]:   g(s) = sigma0(s) + sigma1(s) s + sigma2(s) (1-s).
// `boost` raises every multiplier's SOS degree by that (even) amount.
SosProgram assemble_interval(const Polynomial& g, double t1, double t2, int boost = 0);

// Putinar form on a tube slice for g(x,t), h(x,t) on [t1, t2] (time normalized):
//   g = sigma0 + sigma1 s + sigma2 (1-s) + sigma3 h.
SosProgram assemble_tube(const Polynomial& g, const Polynomial& h, double t1, double t2,
                         int boost = 0);

}  // namespace riskplan
