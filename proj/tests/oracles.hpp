#pragma once

// Self-contained reference implementations used to cross-check the library.
// Everything here is computed by a different route than the code under test:
// direct formulas, explicit enumeration, or textbook recurrences.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "discrete_clt/int_dist.hpp"
#include "discrete_clt/stable_sum.hpp"

namespace oracle {

inline std::vector<double> binomial_pmf(int n, double p) {
  if (n < 1 || !(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("binomial_pmf: need n >= 1, 0 < p < 1");
  }
  const double q = 1.0 - p;
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  // C(n,k) p^k q^(n-k) built by the ratio recurrence from k=0.
  double term = std::pow(q, n);
  for (int k = 0; k <= n; ++k) {
    w[static_cast<std::size_t>(k)] = term;
    if (k < n) term *= (static_cast<double>(n - k) / (k + 1)) * (p / q);
  }
  return w;
}

inline dclt::IntDist binomial(int n, double p) {
  return dclt::IntDist::from_pmf(0, binomial_pmf(n, p));
}

inline dclt::IntDist bernoulli(double p) {
  return dclt::IntDist::from_pmf(0, {1.0 - p, p});
}

// Poisson truncated where the pmf drops below `floor`, kept unnormalized
// remainder as tail mass.
inline dclt::IntDist poisson(double lambda, double floor_at = 1e-18) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson: lambda > 0");
  std::vector<double> w;
  double term = std::exp(-lambda);
  int k = 0;
  dclt::StableSum kept;
  while (true) {
    w.push_back(term);
    kept.add(term);
    ++k;
    term *= lambda / k;
    if (k > lambda && term < floor_at) break;
  }
  double tail = 1.0 - kept.value();
  if (tail < 0.0) tail = 0.0;
  return dclt::IntDist::from_parts(0, std::move(w), tail);
}

inline double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

// TV distance by enumerating P(X in A) over every subset of a small ground
// window — the sup definition rather than the half-L1 identity.
inline double tv_by_subsets(const dclt::IntDist& a, const dclt::IntDist& b) {
  const std::int64_t lo = std::min(a.min_support(), b.min_support());
  const std::int64_t hi = std::max(a.max_support(), b.max_support());
  const std::int64_t n = hi - lo + 1;
  if (n > 20) throw std::invalid_argument("tv_by_subsets: window too large");
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double pa = 0.0, pb = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      if (mask & (1ull << k)) {
        pa += a.pmf(lo + k);
        pb += b.pmf(lo + k);
      }
    }
    best = std::max(best, std::abs(pa - pb));
  }
  return best;
}

// Random distribution on a window of `size` points starting at `offset`.
inline dclt::IntDist random_dist(std::mt19937_64& rng, std::int64_t offset,
                                 int size) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> w(static_cast<std::size_t>(size));
  double total = 0.0;
  for (double& x : w) {
    x = u(rng);
    total += x;
  }
  for (double& x : w) x /= total;
  return dclt::IntDist::from_pmf(offset, std::move(w));
}

}  // namespace oracle
