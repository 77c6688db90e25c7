#pragma once

// Zero-bias and size-bias distributional transforms, the single-summand
// replacement construction for independent sums, and quantile couplings
// feeding the coupling-dependent bounds.

#include <cstdint>
#include <vector>

#include "discrete_clt/int_dist.hpp"

namespace dclt {

// Law of Y* with P(Y* = j-1) = E[(Y - mu) 1(Y >= j)] / sigma^2. Input with
// tail mass is renormalized to its represented window first. Throws for
// point masses (zero variance).
IntDist zero_bias(const IntDist& d);

// Residual |E[(Y - mu) f(Y)] - sigma^2 E df(Y*)| of the defining identity,
// with df the forward difference. The table must cover supp(Y) and
// supp(Y*) + {0, 1}.
double verify_characterization(const IntDist& d, const FuncTable& f);

// Law of X^s with pmf proportional to k P(X = k); nonnegative support and
// positive mean required.
IntDist size_bias(const IntDist& d);

// Independent integer summands with their moment bookkeeping.
struct ComponentSet {
  std::vector<IntDist> components;
  std::vector<double> means;
  std::vector<double> variances;
  double total_mean = 0.0;
  double total_variance = 0.0;

  std::size_t size() const { return components.size(); }
};

// Requires at least one non-degenerate component.
ComponentSet make_component_set(std::vector<IntDist> components);

// Law of W = sum of all components.
IntDist convolve_all(const ComponentSet& cs);

// Law of W_i = W - xi_i (leave-one-out sum); i in [0, n).
IntDist leave_one_out(const ComponentSet& cs, std::size_t i);

// Replacement construction: the variance-weighted mixture of W_i + xi_i*,
// which equals the zero bias of W.
IntDist sum_zero_bias(const ComponentSet& cs);

// Mixture sum lambda_k * parts_k; weights must be nonnegative and total one.
IntDist mix(const std::vector<std::pair<double, IntDist>>& parts);

struct Coupling {
  struct Cell {
    std::int64_t x = 0;
    std::int64_t y = 0;
    double p = 0.0;
  };
  std::vector<Cell> cells;  // ascending in (x, y)
  IntDist marginal_x = IntDist::point_mass(0);
  IntDist marginal_y = IntDist::point_mass(0);
};

// Comonotone (quantile) coupling of a and b: pairs equal quantiles, which
// minimizes E c(X - Y) over all couplings for every convex cost c.
Coupling optimal_coupling(const IntDist& a, const IntDist& b);

// E[min(|X - Y - shift|, cap)] under the coupling; cap may be infinity.
double coupling_cost(const Coupling& c, std::int64_t shift, double cap);

// P(|X - Y - shift| > cap) under the coupling.
double coupling_tail(const Coupling& c, std::int64_t shift, double cap);

// Sum_j |F_a(j) - F_b(j)|, the 1-Wasserstein distance on the integers.
double wasserstein1(const IntDist& a, const IntDist& b);

}  // namespace dclt
