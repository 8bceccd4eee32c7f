#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskplan/poly.hpp"

namespace riskplan::kernels {

// SIMD backend for the batch-evaluation kernels. Scalar is the reference;
// wider backends must produce bit-identical results (parallelism is across
// points, per-point arithmetic order is unchanged).
enum class Backend { Scalar, Avx2 };

bool backend_supported(Backend b);
Backend active_backend();
// Throws ConfigError if the backend is not supported on this CPU.
void set_backend(Backend b);
std::string backend_name(Backend b);

// A polynomial flattened for evaluation over structure-of-arrays inputs.
// Term k multiplies coeffs[k] by input[var]^exp for each factor in
// factors[term_begin[k] .. term_begin[k+1]).
struct CompiledPoly {
  int n_inputs = 0;
  std::vector<double> coeffs;
  std::vector<int> factor_var;
  std::vector<int> factor_exp;
  std::vector<int> term_begin;  // size coeffs.size()+1

  // Maps the polynomial's variables onto input slots in the order given.
  // Throws MissingVariable if the polynomial mentions a variable not listed.
  static CompiledPoly compile(const Polynomial& p, const std::vector<VarId>& input_order);
};

// out[i] = poly(inputs[0][i], ..., inputs[n_inputs-1][i]) for i in [0, n).
void eval_batch(const CompiledPoly& poly, const double* const* inputs, size_t n, double* out);

// Number of entries with v[i] >= 0.
size_t count_nonneg(const double* v, size_t n);

// Minimum entry (n must be >= 1; inputs must be NaN-free).
double min_value(const double* v, size_t n);

}  // namespace riskplan::kernels
