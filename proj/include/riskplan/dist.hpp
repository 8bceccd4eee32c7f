#pragma once

#include <string>
#include <vector>

#include "riskplan/poly.hpp"
#include "riskplan/rng.hpp"

namespace riskplan {

// Distribution of one scalar uncertain parameter. All three families have
// closed-form raw moments of every order.
struct DistributionSpec {
  enum class Kind { Uniform, Gaussian, Beta };
  Kind kind = Kind::Uniform;
  // Uniform: p1 = l, p2 = u.  Gaussian: p1 = mu, p2 = variance.  Beta: p1 = a, p2 = b (on [0,1]).
  double p1 = 0.0;
  double p2 = 1.0;

  static DistributionSpec uniform(double l, double u);
  static DistributionSpec gaussian(double mu, double var);
  static DistributionSpec beta(double a, double b);

  std::string describe() const;
};

// Raw moment E[w^alpha] in closed form.
//   Uniform[l,u]:   (u^(a+1) - l^(a+1)) / ((u-l)(a+1))
//   Gaussian:       m_a = mu*m_{a-1} + (a-1)*var*m_{a-2}, m_0 = 1, m_1 = mu
//   Beta(a,b):      y_k = (a+k-1)/(a+b+k-1) * y_{k-1}, y_0 = 1
double raw_moment(const DistributionSpec& d, int alpha);

// One draw. Deterministic for a given generator state.
double sample(const DistributionSpec& d, Rng& rng);

// Raw moments per uncertain variable, orders 0..order(i).
class MomentTable {
 public:
  MomentTable() = default;
  static MomentTable build(const std::vector<DistributionSpec>& dists, int order);
  static MomentTable build(const std::vector<DistributionSpec>& dists,
                           const std::vector<int>& orders);

  int variable_count() const { return static_cast<int>(moments_.size()); }
  int order(int w_index) const { return static_cast<int>(moments_[w_index].size()) - 1; }
  // Throws InsufficientMomentOrder when alpha exceeds the stored order.
  double moment(int w_index, int alpha) const;

 private:
  std::vector<std::vector<double>> moments_;
};

// Expectation over the uncertain variables: every w-monomial is replaced by the
// product of per-variable raw moments (independent w's). The result has no
// Uncertain variables.
Polynomial expectation(const Polynomial& p, const MomentTable& moments);

}  // namespace riskplan
