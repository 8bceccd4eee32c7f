#include "riskplan/sos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace riskplan {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Affine time substitution t -> t1 + (t2 - t1) s, reusing the Time variable as s.
Polynomial normalize_time(const Polynomial& g, double t1, double t2) {
  if (!(t1 < t2)) throw Error("degenerate interval: need t1 < t2");
  Universe u = g.universe();
  u.has_time = true;
  Polynomial s = Polynomial::variable(VarId::time(), u);
  std::map<VarId, Polynomial> bind;
  bind[VarId::time()] = Polynomial::constant(t1, u) + s * (t2 - t1);
  return g.substitute(bind);
}

int ceil_div2(int v) { return (v + 1) / 2; }

}  // namespace

std::vector<Monomial> monomials_up_to(const std::vector<VarId>& vars, int max_deg) {
  std::vector<Monomial> out;
  std::vector<int> exps(vars.size(), 0);
  // Depth-first enumeration in a fixed order keeps bases deterministic.
  std::function<void(size_t, int)> rec = [&](size_t i, int remaining) {
    if (i == vars.size()) {
      std::vector<Monomial::Factor> fs;
      for (size_t k = 0; k < vars.size(); ++k)
        if (exps[k] > 0) fs.push_back({vars[k], exps[k]});
      out.emplace_back(std::move(fs));
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      exps[i] = e;
      rec(i + 1, remaining - e);
    }
    exps[i] = 0;
  };
  rec(0, max_deg);
  std::sort(out.begin(), out.end(), grlex_less);
  return out;
}

SosProgram build_sos_program(const Polynomial& target, std::vector<SosMultiplier> sigmas) {
  SosProgram p;
  p.scale = std::max(target.max_abs_coeff(), 1.0);
  p.target = target * (1.0 / p.scale);
  p.sigmas = std::move(sigmas);

  int offset = 0;
  for (const auto& s : p.sigmas) {
    int n = s.basis.size();
    p.block_dims.push_back(n);
    p.block_offsets.push_back(offset);
    offset += n * (n + 1) / 2;
  }
  p.n_cols = offset;

  // Column entries bucketed by identity monomial.
  struct Entry {
    int col;
    double coeff;
  };
  std::map<Monomial, std::vector<Entry>, GrlexLess> rows;
  for (size_t j = 0; j < p.sigmas.size(); ++j) {
    const auto& basis = p.sigmas[j].basis.monos;
    const int n = static_cast<int>(basis.size());
    int col = p.block_offsets[j];
    for (int k = 0; k < n; ++k) {
      for (int l = k; l < n; ++l, ++col) {
        Monomial zz = basis[k].times(basis[l]);
        double factor = (k == l) ? 1.0 : kSqrt2;  // 2*Q_kl = sqrt(2)*svec_kl
        for (const auto& [mw, cw] : p.sigmas[j].weight.terms())
          rows[zz.times(mw)].push_back({col, factor * cw});
      }
    }
  }
  for (const auto& [m, c] : p.target.terms()) rows.try_emplace(m);

  p.A = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), p.n_cols);
  p.b = Eigen::VectorXd::Zero(static_cast<int>(rows.size()));
  int r = 0;
  for (const auto& [m, entries] : rows) {
    p.row_monomials.push_back(m);
    for (const auto& e : entries) p.A(r, e.col) += e.coeff;
    p.b(r) = p.target.coefficient(m);
    if (entries.empty() && std::abs(p.b(r)) > 0) {
      p.structurally_infeasible = true;
      p.structural_note = "target monomial unreachable at assembled degrees";
    }
    ++r;
  }
  return p;
}

Polynomial SosProgram::reconstruct(const std::vector<Eigen::MatrixXd>& grams) const {
  Polynomial acc;
  acc.set_universe(target.universe());
  for (size_t j = 0; j < sigmas.size(); ++j) {
    const auto& basis = sigmas[j].basis.monos;
    const int n = static_cast<int>(basis.size());
    Polynomial sigma;
    sigma.set_universe(target.universe());
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) sigma.add_term(basis[k].times(basis[l]), grams[j](k, l));
    sigma.normalize();
    acc = acc + sigma * sigmas[j].weight;
  }
  return acc;
}

SosProgram assemble_interval(const Polynomial& g, double t1, double t2, int boost) {
  if (g.degree_in(VarKind::State) > 0 || g.degree_in(VarKind::Uncertain) > 0)
    throw DegreeMismatch("interval program expects a univariate polynomial in t");
  Polynomial gs = normalize_time(g, t1, t2);
  Universe u = gs.universe();
  u.has_time = true;
  gs.set_universe(u);

  const int D = std::max(gs.degree(), 1);
  const int k0 = ceil_div2(D) + boost / 2;
  const int k12 = std::max(0, ceil_div2(D - 1)) + boost / 2;

  std::vector<VarId> vars = {VarId::time()};
  Polynomial s = Polynomial::variable(VarId::time(), u);
  Polynomial one = Polynomial::constant(1.0, u);

  std::vector<SosMultiplier> sigmas;
  sigmas.push_back({"sigma0", one, {monomials_up_to(vars, k0)}});
  sigmas.push_back({"sigma1", s, {monomials_up_to(vars, k12)}});
  sigmas.push_back({"sigma2", one - s, {monomials_up_to(vars, k12)}});
  return build_sos_program(gs, std::move(sigmas));
}

SosProgram assemble_tube(const Polynomial& g, const Polynomial& h, double t1, double t2,
                         int boost) {
  Polynomial gs = normalize_time(g, t1, t2);
  Polynomial hs = normalize_time(h, t1, t2);
  Universe u = Universe::merged(gs.universe(), hs.universe());
  u.has_time = true;
  gs.set_universe(u);
  hs.set_universe(u);
  if (gs.degree_in(VarKind::Uncertain) > 0 || hs.degree_in(VarKind::Uncertain) > 0)
    throw DegreeMismatch("tube program expects uncertainty already integrated out");

  std::vector<VarId> vars;
  for (int k = 0; k < u.n_state; ++k) vars.push_back(VarId::state(k));
  vars.push_back(VarId::time());

  const int deg_h = std::max(hs.degree(), 1);
  const int D = std::max({gs.degree(), deg_h, 1});
  const int k0 = ceil_div2(D) + boost / 2;
  const int k12 = std::max(0, ceil_div2(D - 1)) + boost / 2;
  const int k3 = std::max(0, ceil_div2(D - deg_h)) + boost / 2;

  Polynomial s = Polynomial::variable(VarId::time(), u);
  Polynomial one = Polynomial::constant(1.0, u);

  std::vector<SosMultiplier> sigmas;
  sigmas.push_back({"sigma0", one, {monomials_up_to(vars, k0)}});
  sigmas.push_back({"sigma1", s, {monomials_up_to(vars, k12)}});
  sigmas.push_back({"sigma2", one - s, {monomials_up_to(vars, k12)}});
  sigmas.push_back({"sigma3", hs, {monomials_up_to(vars, k3)}});
  return build_sos_program(gs, std::move(sigmas));
}

}  // namespace riskplan
