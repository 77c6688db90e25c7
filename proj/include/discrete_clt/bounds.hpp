#pragma once

// Total-variation approximation bounds for integer-valued sums against the
// two-parameter family, together with the exact distances they are meant to
// dominate.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "discrete_clt/int_dist.hpp"
#include "discrete_clt/psi_family.hpp"
#include "discrete_clt/zero_bias.hpp"

namespace dclt {

// Single-variable bound: sum of pmf mismatches between Y and its zero-bias
// transform, compared plain at or above the junction and shifted by one
// below it. The junction defaults to the smallest integer >= mean(y); the
// two-argument form splits at a caller-chosen junction instead (e.g. the
// minimum support of an exact fixed point, where both sums vanish).
double thm41_bound(const IntDist& y);
double thm41_bound(const IntDist& y, std::int64_t kappa);

// d_+^{(i)} = tv(W_i, W_i + 1) for the leave-one-out sum W_i.
double dplus_exact(const ComponentSet& cs, std::size_t i);

// Sum bound at truncation level K > 0 (K = infinity gives the closed form
// with no tail terms). Expectations are taken under the quantile coupling of
// each component with its zero-bias transform; only the smoothed unit-shift
// terms carry the d_+^{(i)} factor, the K-tail probabilities do not.
double thm42_bound(const ComponentSet& cs, double K);
double thm42_bound(const ComponentSet& cs);  // K = infinity

struct Prop44Estimate {
  double U = 0.0;              // sum of min{u_i, 1/2}
  std::vector<double> u;       // u_i = 1 - tv(xi_i, xi_i + 1)
  std::optional<double> bound_w;   // tv(W, W+1) <= U^{-1/2}; absent if U <= 0
  std::optional<double> bound_wi;  // max_i tv(W_i, W_i+1) <= (U-1)^{-1/2};
                                   // absent if U <= 1
};
// Smoothness estimate for d_+ that needs no convolutions. U within 1e-12 of
// the vacuous thresholds counts as vacuous (periodic sets hit U = 0 only up
// to rounding).
Prop44Estimate dplus_prop44(const ComponentSet& cs);

struct Cor43Result {
  double bound = 0.0;      // 1 / sqrt(vartheta2)
  double vartheta2 = 0.0;  // sigma^2 - max_i p_i (1 - p_i)
};
// Indicator-sum bound. Needs at least two indicators, every p in (0, 1).
Cor43Result cor43_bound(const std::vector<double>& ps);

struct BoundReport {
  double mu = 0.0;
  double sigma2 = 0.0;
  std::int64_t kappa = 0;
  double actual_tv = 0.0;  // exact convolution against the family law
  std::optional<double> thm41_bound;
  std::optional<double> thm42_bound;
  std::optional<double> cor43_bound;  // present only for indicator sets
  std::vector<double> dplus_exact;
  std::optional<double> dplus_prop44;  // the uniform (U-1)^{-1/2} estimate
  std::map<std::string, double> baselines;  // name -> tv against W
  double tail_slack = 0.0;  // all truncation masses met along the way
  bool periodic = false;    // every u_i vanishes: approximation fails
};

struct BoundOptions {
  double K = std::numeric_limits<double>::infinity();
  double eps = 1e-15;  // truncation for the reference laws
};

// Full comparison for a component set: exact distance, every applicable
// bound, and baselines against the integerized normal and the exact fixed
// point with the same mean and variance.
BoundReport bound_report(const ComponentSet& cs, const BoundOptions& opt = {});

}  // namespace dclt
