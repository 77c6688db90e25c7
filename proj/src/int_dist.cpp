#include "discrete_clt/int_dist.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "discrete_clt/stable_sum.hpp"

namespace dclt {

namespace {

std::atomic<std::int64_t> g_support_cap{10'000'000};

constexpr double kMassTolLoose = 1e-9;   // accepted on user input
constexpr double kMassTolTight = 1e-12;  // invariant after construction

// Weights below the smallest positive double are treated as exact zeros.
bool is_zero_weight(double w) { return w < 5e-324; }

void trim(std::int64_t& offset, std::vector<double>& w) {
  std::size_t lo = 0;
  while (lo < w.size() && is_zero_weight(w[lo])) ++lo;
  std::size_t hi = w.size();
  while (hi > lo && is_zero_weight(w[hi - 1])) --hi;
  if (lo == hi) {
    w.clear();
    return;
  }
  if (lo > 0 || hi < w.size()) {
    w.assign(w.begin() + static_cast<std::ptrdiff_t>(lo),
             w.begin() + static_cast<std::ptrdiff_t>(hi));
    offset += static_cast<std::int64_t>(lo);
  }
}

void check_nonnegative(const std::vector<double>& w) {
  for (double x : w) {
    if (!(x >= 0.0)) {
      throw std::invalid_argument("IntDist: negative or NaN weight " +
                                  std::to_string(x));
    }
  }
}

}  // namespace

void set_support_cap(std::int64_t points) {
  if (points < 1) throw std::invalid_argument("support cap must be positive");
  g_support_cap.store(points, std::memory_order_relaxed);
}

std::int64_t support_cap() {
  return g_support_cap.load(std::memory_order_relaxed);
}

IntDist IntDist::from_pmf(std::int64_t offset, std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("IntDist: empty weights");
  check_nonnegative(weights);
  StableSum total;
  for (double x : weights) total.add(x);
  const double s = total.value();
  if (is_zero_weight(s)) throw std::invalid_argument("IntDist: zero total mass");
  if (std::abs(s - 1.0) > kMassTolLoose) {
    throw std::invalid_argument("IntDist: total mass " + std::to_string(s) +
                                " outside tolerance");
  }
  for (double& x : weights) x /= s;
  trim(offset, weights);
  return IntDist(offset, std::move(weights), 0.0);
}

IntDist IntDist::from_parts(std::int64_t offset, std::vector<double> weights,
                            double tail_mass) {
  check_nonnegative(weights);
  if (!(tail_mass >= 0.0)) {
    throw std::invalid_argument("IntDist: negative tail mass");
  }
  trim(offset, weights);
  if (weights.empty()) throw std::invalid_argument("IntDist: zero total mass");
  StableSum total;
  for (double x : weights) total.add(x);
  total.add(tail_mass);
  if (std::abs(total.value() - 1.0) > kMassTolTight) {
    throw std::invalid_argument("IntDist: mass " + std::to_string(total.value()) +
                                " violates normalization invariant");
  }
  return IntDist(offset, std::move(weights), tail_mass);
}

IntDist IntDist::point_mass(std::int64_t c) { return IntDist(c, {1.0}, 0.0); }

double mean(const IntDist& d) {
  StableSum acc;
  const auto& w = d.weights();
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc.add(w[k] * static_cast<double>(k));
  }
  return static_cast<double>(d.offset()) + acc.value();
}

double variance(const IntDist& d) {
  const double m = mean(d);
  StableSum acc;
  const auto& w = d.weights();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double x = static_cast<double>(d.offset() + static_cast<std::int64_t>(k)) - m;
    acc.add(w[k] * x * x);
  }
  return acc.value();
}

IntDist convolve(const IntDist& a, const IntDist& b) {
  const std::int64_t n = a.support_size() + b.support_size() - 1;
  if (n > support_cap()) {
    throw SupportCapError("convolution support " + std::to_string(n) +
                          " exceeds cap " + std::to_string(support_cap()));
  }
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  const auto& wa = a.weights();
  const auto& wb = b.weights();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    const double ai = wa[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < wb.size(); ++j) {
      out[i + j] += ai * wb[j];
    }
  }
  const double tail = a.tail_mass() + b.tail_mass() - a.tail_mass() * b.tail_mass();
  return IntDist::from_parts(a.offset() + b.offset(), std::move(out), tail);
}

IntDist shift(const IntDist& d, std::int64_t c) {
  return IntDist::from_parts(d.offset() + c, d.weights(), d.tail_mass());
}

IntDist renormalize(const IntDist& d) {
  if (d.tail_mass() == 0.0) return d;
  StableSum total;
  for (double x : d.weights()) total.add(x);
  std::vector<double> w = d.weights();
  for (double& x : w) x /= total.value();
  return IntDist::from_parts(d.offset(), std::move(w), 0.0);
}

double tv_distance(const IntDist& a, const IntDist& b) {
  const std::int64_t lo = std::min(a.min_support(), b.min_support());
  const std::int64_t hi = std::max(a.max_support(), b.max_support());
  StableSum acc;
  for (std::int64_t j = lo; j <= hi; ++j) {
    acc.add(std::abs(a.pmf(j) - b.pmf(j)));
  }
  return 0.5 * acc.value();
}

double tv_tail_slack(const IntDist& a, const IntDist& b) {
  return 0.5 * (a.tail_mass() + b.tail_mass());
}

double max_pmf(const IntDist& d) {
  return *std::max_element(d.weights().begin(), d.weights().end());
}

double cdf(const IntDist& d, std::int64_t j) {
  if (j < d.min_support()) return 0.0;
  const std::int64_t last = std::min(j, d.max_support());
  StableSum acc;
  for (std::int64_t i = d.min_support(); i <= last; ++i) acc.add(d.pmf(i));
  return acc.value();
}

double FuncTable::sup_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace dclt
