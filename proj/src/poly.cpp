#include "riskplan/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace riskplan {

std::string VarId::name() const {
  switch (kind) {
    case VarKind::State:
      return "x" + std::to_string(index + 1);
    case VarKind::Uncertain:
      return "w" + std::to_string(index + 1);
    case VarKind::Time:
      return "t";
  }
  return "?";
}

Monomial::Monomial(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.var.key() < b.var.key(); });
  for (const Factor& f : factors) {
    if (f.exp == 0) continue;
    if (f.exp < 0) throw Error("negative exponent in monomial");
    if (!factors_.empty() && factors_.back().var == f.var) {
      factors_.back().exp += f.exp;
    } else {
      factors_.push_back(f);
    }
  }
}

int Monomial::total_degree() const {
  int d = 0;
  for (const Factor& f : factors_) d += f.exp;
  return d;
}

int Monomial::exponent_of(VarId v) const {
  for (const Factor& f : factors_)
    if (f.var == v) return f.exp;
  return 0;
}

int Monomial::degree_in(VarKind k) const {
  int d = 0;
  for (const Factor& f : factors_)
    if (f.var.kind == k) d += f.exp;
  return d;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  size_t i = 0, j = 0;
  while (i < factors_.size() && j < o.factors_.size()) {
    uint32_t ka = factors_[i].var.key(), kb = o.factors_[j].var.key();
    if (ka < kb) {
      r.factors_.push_back(factors_[i++]);
    } else if (kb < ka) {
      r.factors_.push_back(o.factors_[j++]);
    } else {
      r.factors_.push_back({factors_[i].var, factors_[i].exp + o.factors_[j].exp});
      ++i, ++j;
    }
  }
  while (i < factors_.size()) r.factors_.push_back(factors_[i++]);
  while (j < o.factors_.size()) r.factors_.push_back(o.factors_[j++]);
  return r;
}

Monomial Monomial::without(VarId v, int* exp_out) const {
  Monomial r;
  if (exp_out) *exp_out = 0;
  for (const Factor& f : factors_) {
    if (f.var == v) {
      if (exp_out) *exp_out = f.exp;
    } else {
      r.factors_.push_back(f);
    }
  }
  return r;
}

bool Monomial::operator==(const Monomial& o) const {
  if (factors_.size() != o.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (!(factors_[i].var == o.factors_[i].var) || factors_[i].exp != o.factors_[i].exp)
      return false;
  return true;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  // Same total degree: lexicographic over the canonical variable order, where
  // a higher exponent on an earlier variable makes the monomial larger.
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  size_t i = 0, j = 0;
  while (i < fa.size() || j < fb.size()) {
    uint32_t ka = i < fa.size() ? fa[i].var.key() : UINT32_MAX;
    uint32_t kb = j < fb.size() ? fb[j].var.key() : UINT32_MAX;
    if (ka == kb) {
      if (fa[i].exp != fb[j].exp) return fa[i].exp < fb[j].exp;
      ++i, ++j;
    } else if (ka < kb) {
      // a has a positive exponent on an earlier variable; a is lex-larger.
      return false;
    } else {
      return true;
    }
  }
  return false;
}

Polynomial Polynomial::constant(double c, const Universe& u) {
  Polynomial p;
  p.universe_ = u;
  if (std::abs(c) >= kScrubTol) p.terms_.emplace(Monomial(), c);
  return p;
}

Polynomial Polynomial::variable(VarId v, const Universe& u) {
  if (!u.contains(v)) throw UndeclaredVariable("variable " + v.name() + " not in universe");
  Polynomial p;
  p.universe_ = u;
  p.terms_.emplace(Monomial({{v, 1}}), 1.0);
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  // Map is grlex-ascending; the last term has maximal total degree.
  return terms_.rbegin()->first.total_degree();
}

int Polynomial::degree_in(VarKind k) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(k));
  return d;
}

int Polynomial::max_exponent(VarId v) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent_of(v));
  return d;
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coeff() const {
  double r = 0.0;
  for (const auto& [m, c] : terms_) r = std::max(r, std::abs(c));
  return r;
}

double Polynomial::constant_value() const {
  if (terms_.empty()) return 0.0;
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  throw Error("constant_value() on a non-constant polynomial");
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r.universe_ = Universe::merged(universe_, o.universe_);
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  r.normalize();
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r.universe_ = Universe::merged(universe_, o.universe_);
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  r.universe_ = Universe::merged(universe_, o.universe_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma.times(mb), ca * cb);
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(double c) const {
  Polynomial r = *this;
  for (auto& [m, v] : r.terms_) v *= c;
  r.normalize();
  return r;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw Error("negative polynomial power");
  Polynomial r = Polynomial::constant(1.0, universe_);
  for (int i = 0; i < e; ++i) r = r * (*this);
  return r;
}

double Polynomial::eval(const Assignment& at) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = c;
    for (const auto& f : m.factors()) {
      auto x = at.value_of(f.var);
      if (!x) throw MissingVariable("no value for " + f.var.name());
      v *= ipow(*x, f.exp);
    }
    acc += v;
  }
  return acc;
}

Polynomial Polynomial::substitute(const std::map<VarId, Polynomial>& bindings) const {
  Universe u = universe_;
  for (const auto& [v, p] : bindings) u = Universe::merged(u, p.universe());
  Polynomial r;
  r.universe_ = u;
  for (const auto& [m, c] : terms_) {
    Polynomial term = Polynomial::constant(c, u);
    for (const auto& f : m.factors()) {
      auto it = bindings.find(f.var);
      if (it == bindings.end()) {
        Polynomial v;
        v.universe_ = u;
        v.terms_.emplace(Monomial({{f.var, f.exp}}), 1.0);
        term = term * v;
      } else {
        term = term * it->second.pow(f.exp);
      }
    }
    for (const auto& [m2, c2] : term.terms()) r.add_term(m2, c2);
  }
  r.normalize();
  return r;
}

Polynomial Polynomial::derivative(VarId v) const {
  Polynomial r;
  r.universe_ = universe_;
  for (const auto& [m, c] : terms_) {
    int e = 0;
    Monomial rest = m.without(v, &e);
    if (e == 0) continue;
    Monomial dm = (e == 1) ? rest : rest.times(Monomial({{v, e - 1}}));
    r.add_term(dm, c * e);
  }
  r.normalize();
  return r;
}

void Polynomial::add_term(const Monomial& m, double c) {
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

void Polynomial::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < kScrubTol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

double max_coeff_distance(const Polynomial& a, const Polynomial& b) {
  double r = 0.0;
  for (const auto& [m, c] : a.terms()) r = std::max(r, std::abs(c - b.coefficient(m)));
  for (const auto& [m, c] : b.terms()) r = std::max(r, std::abs(c - a.coefficient(m)));
  return r;
}

}  // namespace riskplan
