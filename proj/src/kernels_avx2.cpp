// AVX2 variants of the batch kernels. This translation unit is the only one
// compiled with -mavx2; callers reach it through the runtime dispatch in
// kernels.cpp. Lanes run parallel over points, so per-point arithmetic keeps
// the scalar order and results are bit-identical to the scalar kernels.

#include "riskplan/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace riskplan::kernels {

namespace {

// Mirrors riskplan::ipow lane-wise (same squaring order, mul/add only, no FMA).
inline __m256d ipow4(__m256d base, int e) {
  __m256d r = _mm256_set1_pd(1.0);
  __m256d b = base;
  while (e > 0) {
    if (e & 1) r = _mm256_mul_pd(r, b);
    e >>= 1;
    if (e) b = _mm256_mul_pd(b, b);
  }
  return r;
}

}  // namespace

void eval_batch_avx2(const CompiledPoly& poly, const double* const* inputs, size_t n,
                     double* out) {
  const size_t n_terms = poly.coeffs.size();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (size_t k = 0; k < n_terms; ++k) {
      __m256d v = _mm256_set1_pd(poly.coeffs[k]);
      for (int f = poly.term_begin[k]; f < poly.term_begin[k + 1]; ++f) {
        __m256d x = _mm256_loadu_pd(inputs[poly.factor_var[f]] + i);
        v = _mm256_mul_pd(v, ipow4(x, poly.factor_exp[f]));
      }
      acc = _mm256_add_pd(acc, v);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
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

size_t count_nonneg_avx2(const double* v, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t c = 0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(v + i);
    __m256d ge = _mm256_cmp_pd(x, zero, _CMP_GE_OQ);
    c += static_cast<size_t>(_mm_popcnt_u32(static_cast<unsigned>(_mm256_movemask_pd(ge))));
  }
  for (; i < n; ++i)
    if (v[i] >= 0.0) ++c;
  return c;
}

double min_value_avx2(const double* v, size_t n) {
  size_t i = 0;
  double m = v[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(v);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(v + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    m = lanes[0];
    for (int k = 1; k < 4; ++k) m = lanes[k] < m ? lanes[k] : m;
  }
  for (; i < n; ++i) m = v[i] < m ? v[i] : m;
  return m;
}

}  // namespace riskplan::kernels

#else

namespace riskplan::kernels {

// Non-x86 fallbacks; never dispatched to (backend_supported(Avx2) is false).
void eval_batch_avx2(const CompiledPoly&, const double* const*, size_t, double*) {}
size_t count_nonneg_avx2(const double*, size_t) { return 0; }
double min_value_avx2(const double*, size_t) { return 0; }

}  // namespace riskplan::kernels

#endif
