#pragma once

#include <string>
#include <vector>

#include "riskplan/contour.hpp"
#include "riskplan/sdp.hpp"

namespace riskplan {

// Multiplier degrees: the natural degrees are tried first, then raised by 2
// until max_boost. A larger cap only enlarges the certificate space, so
// verification outcomes are monotone in it.
struct DegreePolicy {
  int max_boost_interval = 0;
  int max_boost_tube = 2;
};

struct VerifyOptions {
  DegreePolicy degrees;
  SolverConfig solver;
  int prefilter_time_samples = 64;
  int prefilter_space_samples = 24;  // per time sample, tube programs only
  bool parallel = true;
};

struct ConstraintResult {
  std::string label;
  Certificate cert;
};

// Outcome of verifying one trajectory segment or tube span against every
// free-space constraint. Verified iff all constraints are Verified.
struct VerifyReport {
  CertStatus status = CertStatus::NotVerified;
  std::vector<ConstraintResult> constraints;
  double total_time_s = 0.0;

  bool verified() const { return status == CertStatus::Verified; }
  const ConstraintResult* first_failure() const;
};

// Certifies x(t) in the free space for all t in [t1, t2]. x_of_t holds one
// polynomial in t per state dimension.
VerifyReport verify_segment(const std::vector<Polynomial>& x_of_t, double t1, double t2,
                            const FreeSpace& free, const VerifyOptions& opts = {});

// Certifies the tube slice {x : h(x,t) >= 0} in the free space for all
// t in [t1, t2], where h = r2_of_t - ||x - center(t)||^2. State variables are
// rescaled to the workspace box internally for conditioning.
VerifyReport verify_tube(const std::vector<Polynomial>& center, const Polynomial& r2_of_t,
                         double t1, double t2, const FreeSpace& free,
                         const VerifyOptions& opts = {});

}  // namespace riskplan
