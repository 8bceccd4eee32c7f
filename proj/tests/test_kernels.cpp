#include <doctest.h>

#include <random>

#include "riskplan/kernels.hpp"
#include "riskplan/poly_io.hpp"

using namespace riskplan;
using kernels::Backend;

namespace {

struct BackendGuard {
  Backend saved = kernels::active_backend();
  ~BackendGuard() { kernels::set_backend(saved); }
};

}  // namespace

TEST_CASE("compiled polynomial matches Polynomial::eval") {
  Universe u{2, 1, true};
  Polynomial p = parse_polynomial("0.5*x1^3*w1 - 2*x2^2 + t*x1 - 0.25", u);
  auto cp = kernels::CompiledPoly::compile(
      p, {VarId::state(0), VarId::state(1), VarId::uncertain(0), VarId::time()});

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-2, 2);
  const size_t n = 257;
  std::vector<double> x1(n), x2(n), w1(n), t(n), out(n);
  for (size_t i = 0; i < n; ++i) x1[i] = d(rng), x2[i] = d(rng), w1[i] = d(rng), t[i] = d(rng);
  const double* inputs[] = {x1.data(), x2.data(), w1.data(), t.data()};
  kernels::eval_batch(cp, inputs, n, out.data());
  for (size_t i = 0; i < n; i += 17) {
    Assignment at;
    at.state = {x1[i], x2[i]};
    at.uncertain = {w1[i]};
    at.time = t[i];
    CHECK(out[i] == doctest::Approx(p.eval(at)).epsilon(1e-12));
  }
}

TEST_CASE("scalar and SIMD backends are bit identical") {
  if (!kernels::backend_supported(Backend::Avx2)) {
    MESSAGE("AVX2 not available; dispatch covered by scalar path only");
    return;
  }
  BackendGuard guard;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-3, 3);
  std::uniform_int_distribution<int> nd(1, 1025);

  Universe u{2, 2, true};
  std::vector<Polynomial> polys = {
      parse_polynomial("w1^2 - x1^2 - x2^2", u),
      parse_polynomial("1 - 7*x1^9 + 0.03*w2^5*x2 - t^4*w1 + x1*x2*w1*w2*t", u),
      parse_polynomial("42", u),
      Polynomial{},
  };
  std::vector<VarId> order = {VarId::state(0), VarId::state(1), VarId::uncertain(0),
                              VarId::uncertain(1), VarId::time()};

  for (const auto& p : polys) {
    auto cp = kernels::CompiledPoly::compile(p, order);
    for (int rep = 0; rep < 8; ++rep) {
      size_t n = nd(rng);
      std::vector<std::vector<double>> cols(5, std::vector<double>(n));
      for (auto& col : cols)
        for (auto& v : col) v = d(rng);
      const double* inputs[] = {cols[0].data(), cols[1].data(), cols[2].data(), cols[3].data(),
                                cols[4].data()};

      std::vector<double> out_scalar(n), out_simd(n);
      kernels::set_backend(Backend::Scalar);
      kernels::eval_batch(cp, inputs, n, out_scalar.data());
      size_t cnt_scalar = kernels::count_nonneg(out_scalar.data(), n);
      double min_scalar = kernels::min_value(out_scalar.data(), n);

      kernels::set_backend(Backend::Avx2);
      kernels::eval_batch(cp, inputs, n, out_simd.data());
      size_t cnt_simd = kernels::count_nonneg(out_simd.data(), n);
      double min_simd = kernels::min_value(out_simd.data(), n);

      CHECK(out_scalar == out_simd);  // bitwise
      CHECK(cnt_scalar == cnt_simd);
      CHECK(min_scalar == min_simd);
    }
  }
}

TEST_CASE("count_nonneg counts boundary as nonnegative") {
  std::vector<double> v = {-1.0, 0.0, 1.0, -0.0, 2.5};
  CHECK(kernels::count_nonneg(v.data(), v.size()) == 4);
}

TEST_CASE("compile rejects unmapped variables") {
  Universe u{1, 1, false};
  Polynomial p = parse_polynomial("x1*w1", u);
  CHECK_THROWS_AS(kernels::CompiledPoly::compile(p, {VarId::state(0)}), MissingVariable);
}

TEST_CASE("backend selection is validated") {
  CHECK(kernels::backend_supported(Backend::Scalar));
  CHECK_NOTHROW(kernels::set_backend(kernels::active_backend()));
}
