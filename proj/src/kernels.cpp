#include "riskplan/kernels.hpp"

#include <algorithm>
#include <atomic>

#include "riskplan/errors.hpp"

namespace riskplan::kernels {

// Implemented in kernels_avx2.cpp (compiled with -mavx2).
void eval_batch_avx2(const CompiledPoly& poly, const double* const* inputs, size_t n,
                     double* out);
size_t count_nonneg_avx2(const double* v, size_t n);
double min_value_avx2(const double* v, size_t n);

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

namespace {
std::atomic<Backend> g_backend{backend_supported(Backend::Avx2) ? Backend::Avx2
                                                                : Backend::Scalar};
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw ConfigError("kernel backend " + backend_name(b) + " not supported on this CPU");
  g_backend.store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "?";
}

CompiledPoly CompiledPoly::compile(const Polynomial& p, const std::vector<VarId>& input_order) {
  CompiledPoly c;
  c.n_inputs = static_cast<int>(input_order.size());
  c.term_begin.push_back(0);
  for (const auto& [m, coeff] : p.terms()) {
    c.coeffs.push_back(coeff);
    for (const auto& f : m.factors()) {
      auto it = std::find(input_order.begin(), input_order.end(), f.var);
      if (it == input_order.end())
        throw MissingVariable("compile: no input slot for " + f.var.name());
      c.factor_var.push_back(static_cast<int>(it - input_order.begin()));
      c.factor_exp.push_back(f.exp);
    }
    c.term_begin.push_back(static_cast<int>(c.factor_var.size()));
  }
  return c;
}

static void eval_batch_scalar(const CompiledPoly& poly, const double* const* inputs, size_t n,
                              double* out) {
  const size_t n_terms = poly.coeffs.size();
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (size_t k = 0; k < n_terms; ++k) {
      double v = poly.coeffs[k];
      for (int f = poly.term_begin[k]; f < poly.term_begin[k + 1]; ++f)
        v *= ipow(inputs[poly.factor_var[f]][i], poly.factor_exp[f]);
      acc += v;
    }
    out[i] = acc;
  }
}

static size_t count_nonneg_scalar(const double* v, size_t n) {
  size_t c = 0;
  for (size_t i = 0; i < n; ++i)
    if (v[i] >= 0.0) ++c;
  return c;
}

static double min_value_scalar(const double* v, size_t n) {
  double m = v[0];
  for (size_t i = 1; i < n; ++i) m = std::min(m, v[i]);
  return m;
}

void eval_batch(const CompiledPoly& poly, const double* const* inputs, size_t n, double* out) {
  if (active_backend() == Backend::Avx2)
    eval_batch_avx2(poly, inputs, n, out);
  else
    eval_batch_scalar(poly, inputs, n, out);
}

size_t count_nonneg(const double* v, size_t n) {
  if (active_backend() == Backend::Avx2) return count_nonneg_avx2(v, n);
  return count_nonneg_scalar(v, n);
}

double min_value(const double* v, size_t n) {
  if (n == 0) throw Error("min_value on empty range");
  if (active_backend() == Backend::Avx2) return min_value_avx2(v, n);
  return min_value_scalar(v, n);
}

}  // namespace riskplan::kernels
