#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskplan/sos.hpp"

namespace riskplan {

struct SolverConfig {
  int max_iters = 20000;
  double conv_tol = 1e-9;      // coefficient residual at which the solve stops
  double residual_tol = 1e-7;  // Verified requires residual <= this
  double psd_tol = 1e-8;       // Verified requires margin >= -this
  int polish_iters = 40;
  int stall_window = 2500;     // iterations without residual progress => stall
};

enum class CertStatus { Verified, NotVerified, SolverError };

// Why a solve ended. NotVerified covers both disproof and failure to find a
// certificate at the assembled degrees; planners treat them identically.
enum class CertReason {
  Converged,          // a certificate was extracted
  SampledNegative,    // constraint seen negative at a sample point (disproof)
  Structural,         // target monomial unreachable at these degrees
  Stalled,            // residual stopped improving (likely infeasible)
  IterationCap,       // max_iters exhausted
  Numerical,          // NaN/Inf or eigensolver failure
};

std::string to_string(CertStatus s);
std::string to_string(CertReason r);

// Outcome of one SOS feasibility solve. The Gram matrices reproduce the
// (normalized) target through SosProgram::reconstruct within `residual`;
// `margin` is the smallest eigenvalue across blocks after the final projection
// onto the coefficient-matching subspace.
struct Certificate {
  CertStatus status = CertStatus::NotVerified;
  CertReason reason = CertReason::IterationCap;
  std::string constraint_label;
  std::vector<Eigen::MatrixXd> grams;
  std::vector<int> gram_dims;
  double margin = 0.0;
  double residual = 0.0;
  double scale = 1.0;       // target normalization factor of the program
  double witness_value = 0.0;  // for SampledNegative: the negative value seen
  double witness_time = 0.0;
  int iterations = 0;
  int degree_boost = 0;
  double solve_time_s = 0.0;

  bool verified() const { return status == CertStatus::Verified; }
};

// Solves the SOS feasibility problem by Douglas-Rachford iteration between the
// PSD cone (block Grams) and the affine coefficient-matching subspace.
Certificate solve(const SosProgram& program, const SolverConfig& config = {});

}  // namespace riskplan
