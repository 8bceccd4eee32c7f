#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riskplan/errors.hpp"

namespace riskplan {

// Coefficients with magnitude below this are dropped after every operation,
// so that exact cancellations produce structurally empty polynomials.
inline constexpr double kScrubTol = 1e-14;

// Variable kinds, in canonical order: state x, uncertain w, time t.
enum class VarKind : uint8_t { State = 0, Uncertain = 1, Time = 2 };

struct VarId {
  VarKind kind = VarKind::State;
  int index = 0;

  static VarId state(int i) { return {VarKind::State, i}; }
  static VarId uncertain(int i) { return {VarKind::Uncertain, i}; }
  static VarId time() { return {VarKind::Time, 0}; }

  // Sort key realizing the canonical order State < Uncertain < Time, then index.
  uint32_t key() const {
    return (static_cast<uint32_t>(kind) << 24) | static_cast<uint32_t>(index);
  }
  bool operator==(const VarId& o) const { return kind == o.kind && index == o.index; }
  bool operator!=(const VarId& o) const { return !(*this == o); }
  bool operator<(const VarId& o) const { return key() < o.key(); }

  std::string name() const;  // "x1", "w2", "t" (1-based indices)
};

// The declared set of variables a polynomial may mention.
struct Universe {
  int n_state = 0;
  int n_uncertain = 0;
  bool has_time = false;

  bool contains(VarId v) const {
    switch (v.kind) {
      case VarKind::State:
        return v.index >= 0 && v.index < n_state;
      case VarKind::Uncertain:
        return v.index >= 0 && v.index < n_uncertain;
      case VarKind::Time:
        return has_time && v.index == 0;
    }
    return false;
  }
  static Universe merged(const Universe& a, const Universe& b) {
    return {std::max(a.n_state, b.n_state), std::max(a.n_uncertain, b.n_uncertain),
            a.has_time || b.has_time};
  }
  bool operator==(const Universe& o) const {
    return n_state == o.n_state && n_uncertain == o.n_uncertain && has_time == o.has_time;
  }
};

// A power product with strictly positive exponents, factors sorted by VarId key.
class Monomial {
 public:
  struct Factor {
    VarId var;
    int exp;
  };

  Monomial() = default;  // the constant monomial 1
  // Builds from (possibly unsorted, possibly repeated) factors; zero exponents dropped.
  explicit Monomial(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int total_degree() const;
  int exponent_of(VarId v) const;
  int degree_in(VarKind k) const;

  Monomial times(const Monomial& o) const;
  // Removes variable v entirely, returning its old exponent.
  Monomial without(VarId v, int* exp_out = nullptr) const;

  bool operator==(const Monomial& o) const;

 private:
  std::vector<Factor> factors_;
};

// Graded lexicographic order (total degree, then canonical variable order).
bool grlex_less(const Monomial& a, const Monomial& b);

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(a, b); }
};

// Point at which to evaluate: values for state/uncertain variables by index plus time.
struct Assignment {
  std::vector<double> state;
  std::vector<double> uncertain;
  std::optional<double> time;

  std::optional<double> value_of(VarId v) const {
    switch (v.kind) {
      case VarKind::State:
        if (v.index < static_cast<int>(state.size())) return state[v.index];
        return std::nullopt;
      case VarKind::Uncertain:
        if (v.index < static_cast<int>(uncertain.size())) return uncertain[v.index];
        return std::nullopt;
      case VarKind::Time:
        return time;
    }
    return std::nullopt;
  }
};

// Sparse multivariate polynomial with real coefficients over a declared universe.
// Immutable in spirit: all operations return new values.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GrlexLess>;

  Polynomial() = default;  // zero over the empty universe

  static Polynomial constant(double c, const Universe& u = {});
  static Polynomial variable(VarId v, const Universe& u);

  const Universe& universe() const { return universe_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  int degree() const;  // degree of the zero polynomial is reported as -1
  int degree_in(VarKind k) const;
  int max_exponent(VarId v) const;
  double coefficient(const Monomial& m) const;
  // Largest coefficient magnitude, 0 for the zero polynomial.
  double max_abs_coeff() const;
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  double constant_value() const;  // requires is_constant()

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double c) const;
  friend Polynomial operator*(double c, const Polynomial& p) { return p * c; }

  Polynomial pow(int e) const;

  double eval(const Assignment& at) const;
  Polynomial substitute(const std::map<VarId, Polynomial>& bindings) const;
  Polynomial derivative(VarId v) const;

  // Exact structural equality (same terms, same coefficients bitwise).
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // Builder access: accumulates a term; call normalize() when done.
  void add_term(const Monomial& m, double c);
  void normalize();
  void set_universe(const Universe& u) { universe_ = u; }

 private:
  Universe universe_;
  TermMap terms_;
};

// Max |difference of coefficients| between two polynomials (for approximate checks).
double max_coeff_distance(const Polynomial& a, const Polynomial& b);

// Integer power with the conventional exponentiation-by-squaring order.
// Shared by scalar and SIMD kernels so results match bit-for-bit.
inline double ipow(double base, int e) {
  double r = 1.0;
  double b = base;
  while (e > 0) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

}  // namespace riskplan
