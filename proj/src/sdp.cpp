#include "riskplan/sdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace riskplan {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;

void unsvec(const Eigen::VectorXd& q, int offset, int n, Eigen::MatrixXd& M) {
  M.resize(n, n);
  int idx = offset;
  for (int k = 0; k < n; ++k) {
    M(k, k) = q(idx++);
    for (int l = k + 1; l < n; ++l, ++idx) {
      double v = q(idx) * kInvSqrt2;
      M(k, l) = v;
      M(l, k) = v;
    }
  }
}

void svec_into(const Eigen::MatrixXd& M, int offset, Eigen::VectorXd& q) {
  const int n = static_cast<int>(M.rows());
  int idx = offset;
  for (int k = 0; k < n; ++k) {
    q(idx++) = M(k, k);
    for (int l = k + 1; l < n; ++l, ++idx) q(idx) = M(k, l) * kSqrt2;
  }
}

struct PsdProjector {
  const SosProgram& p;
  std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> eigs;
  Eigen::MatrixXd scratch;

  explicit PsdProjector(const SosProgram& prog) : p(prog), eigs(prog.block_dims.size()) {}

  // Returns the smallest eigenvalue seen across blocks (before clamping).
  double project(const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    out.resize(in.size());
    double min_eig = 0.0;
    for (size_t j = 0; j < p.block_dims.size(); ++j) {
      const int n = p.block_dims[j];
      unsvec(in, p.block_offsets[j], n, scratch);
      if (n == 1) {
        double v = scratch(0, 0);
        min_eig = std::min(min_eig, v);
        out(p.block_offsets[j]) = std::max(0.0, v);
        continue;
      }
      eigs[j].compute(scratch);
      if (eigs[j].info() != Eigen::Success) throw Error("eigendecomposition failed");
      Eigen::VectorXd lam = eigs[j].eigenvalues();
      min_eig = std::min(min_eig, lam.minCoeff());
      for (int k = 0; k < n; ++k) lam(k) = std::max(0.0, lam(k));
      scratch = eigs[j].eigenvectors() * lam.asDiagonal() * eigs[j].eigenvectors().transpose();
      svec_into(scratch, p.block_offsets[j], out);
    }
    return min_eig;
  }
};

double min_eig_of_blocks(const SosProgram& p, const Eigen::VectorXd& q) {
  double min_eig = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd M;
  for (size_t j = 0; j < p.block_dims.size(); ++j) {
    unsvec(q, p.block_offsets[j], p.block_dims[j], M);
    if (p.block_dims[j] == 1) {
      min_eig = std::min(min_eig, M(0, 0));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
  }
  return min_eig;
}

std::vector<Eigen::MatrixXd> extract_blocks(const SosProgram& p, const Eigen::VectorXd& q) {
  std::vector<Eigen::MatrixXd> blocks(p.block_dims.size());
  for (size_t j = 0; j < p.block_dims.size(); ++j)
    unsvec(q, p.block_offsets[j], p.block_dims[j], blocks[j]);
  return blocks;
}

}  // namespace

std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Verified:
      return "verified";
    case CertStatus::NotVerified:
      return "not_verified";
    case CertStatus::SolverError:
      return "solver_error";
  }
  return "?";
}

std::string to_string(CertReason r) {
  switch (r) {
    case CertReason::Converged:
      return "converged";
    case CertReason::SampledNegative:
      return "sampled_negative";
    case CertReason::Structural:
      return "structural";
    case CertReason::Stalled:
      return "stalled";
    case CertReason::IterationCap:
      return "iteration_cap";
    case CertReason::Numerical:
      return "numerical";
  }
  return "?";
}

Certificate solve(const SosProgram& program, const SolverConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.scale = program.scale;
  cert.gram_dims = program.block_dims;
  auto finish = [&](Certificate c) {
    c.solve_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return c;
  };

  if (program.structurally_infeasible) {
    cert.status = CertStatus::NotVerified;
    cert.reason = CertReason::Structural;
    return finish(cert);
  }
  if (!program.b.allFinite() || !program.A.allFinite()) {
    cert.status = CertStatus::SolverError;
    cert.reason = CertReason::Numerical;
    return finish(cert);
  }

  // Trivial program: zero target with no blocks or all-zero solution.
  if (program.n_cols == 0) {
    bool zero_b = program.b.size() == 0 || program.b.lpNorm<Eigen::Infinity>() == 0.0;
    cert.status = zero_b ? CertStatus::Verified : CertStatus::NotVerified;
    cert.reason = zero_b ? CertReason::Converged : CertReason::Structural;
    return finish(cert);
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(program.A);
  const Eigen::MatrixXd pinv = cod.pseudoInverse();

  // Consistency of the linear system itself (b must lie in range(A)).
  Eigen::VectorXd q_ls = pinv * program.b;
  if ((program.A * q_ls - program.b).lpNorm<Eigen::Infinity>() > 1e-8) {
    cert.status = CertStatus::NotVerified;
    cert.reason = CertReason::Structural;
    return finish(cert);
  }

  auto project_affine = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd {
    return q - pinv * (program.A * q - program.b);
  };

  PsdProjector psd(program);

  Eigen::VectorXd z = q_ls;
  Eigen::VectorXd x(z.size()), y(z.size());
  double best_res = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  bool converged = false;

  int it = 0;
  try {
    for (; it < config.max_iters; ++it) {
      psd.project(z, x);
      double res = (program.A * x - program.b).lpNorm<Eigen::Infinity>();
      if (!std::isfinite(res)) {
        cert.status = CertStatus::SolverError;
        cert.reason = CertReason::Numerical;
        cert.iterations = it;
        return finish(cert);
      }
      if (res < best_res * 0.999) {
        best_res = res;
        best_iter = it;
      }
      if (res <= config.conv_tol) {
        converged = true;
        break;
      }
      if (it - best_iter > config.stall_window) break;  // stalled
      y = project_affine(2.0 * x - z);
      z += y - x;
    }
  } catch (const Error&) {
    cert.status = CertStatus::SolverError;
    cert.reason = CertReason::Numerical;
    cert.iterations = it;
    return finish(cert);
  }
  cert.iterations = it;

  if (!converged) {
    cert.status = CertStatus::NotVerified;
    cert.reason = (it >= config.max_iters) ? CertReason::IterationCap : CertReason::Stalled;
    cert.residual = best_res;
    return finish(cert);
  }

  // Extraction: PSD iterate, then exact projection onto the coefficient
  // subspace; a few alternating polish rounds keep the best margin.
  psd.project(z, x);
  Eigen::VectorXd q_final = project_affine(x);
  double margin = min_eig_of_blocks(program, q_final);
  for (int p = 0; p < config.polish_iters; ++p) {
    psd.project(q_final, y);
    Eigen::VectorXd q_next = project_affine(y);
    double m_next = min_eig_of_blocks(program, q_next);
    if (m_next <= margin) break;
    q_final = q_next;
    margin = m_next;
    if (margin >= 0.0) break;
  }

  cert.grams = extract_blocks(program, q_final);
  cert.margin = margin;
  cert.residual = (program.A * q_final - program.b).lpNorm<Eigen::Infinity>();
  if (cert.residual <= config.residual_tol && cert.margin >= -config.psd_tol) {
    cert.status = CertStatus::Verified;
    cert.reason = CertReason::Converged;
  } else {
    cert.status = CertStatus::NotVerified;
    cert.reason = CertReason::Numerical;
  }
  return finish(cert);
}

}  // namespace riskplan
