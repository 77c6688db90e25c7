#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dclt {

// Thrown when a convolution would exceed the configured support cap.
class SupportCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maximum number of support points a convolution result may have.
// Default 1e7; the CLI overrides it from DISCRETE_CLT_SUPPORT_CAP.
void set_support_cap(std::int64_t points);
std::int64_t support_cap();

/// Finite-support probability mass function on the integers.
///
/// weights()[k] is the probability of the point offset() + k. The
/// representation is always trimmed (first and last weights positive) and
/// tail_mass() carries any mass lost to truncation; truncation never
/// renormalizes, so sum(weights) + tail_mass stays within 1e-12 of one.
/// Values are immutable after construction and safe to share across threads.
class IntDist {
 public:
  /// Checked construction from raw pmf values. Rejects negative weights and
  /// totals outside [1-1e-9, 1+1e-9]; renormalizes the remainder to total
  /// mass one with compensated summation. tail_mass is zero.
  static IntDist from_pmf(std::int64_t offset, std::vector<double> weights);

  /// Construction for internally computed laws: trims and validates but does
  /// not renormalize. sum(weights) + tail_mass must already be within 1e-12
  /// of one.
  static IntDist from_parts(std::int64_t offset, std::vector<double> weights,
                            double tail_mass);

  /// Point mass at c.
  static IntDist point_mass(std::int64_t c);

  std::int64_t offset() const { return offset_; }
  std::int64_t min_support() const { return offset_; }
  std::int64_t max_support() const {
    return offset_ + static_cast<std::int64_t>(weights_.size()) - 1;
  }
  std::int64_t support_size() const {
    return static_cast<std::int64_t>(weights_.size());
  }
  const std::vector<double>& weights() const { return weights_; }
  double tail_mass() const { return tail_mass_; }

  /// Probability of the point j (zero outside the represented window).
  double pmf(std::int64_t j) const {
    if (j < offset_) return 0.0;
    const std::int64_t k = j - offset_;
    if (k >= static_cast<std::int64_t>(weights_.size())) return 0.0;
    return weights_[static_cast<std::size_t>(k)];
  }

  bool operator==(const IntDist&) const = default;

 private:
  IntDist(std::int64_t offset, std::vector<double> weights, double tail_mass)
      : offset_(offset), weights_(std::move(weights)), tail_mass_(tail_mass) {}

  std::int64_t offset_ = 0;
  std::vector<double> weights_;
  double tail_mass_ = 0.0;
};

double mean(const IntDist& d);
double variance(const IntDist& d);

/// Exact law of the sum of two independent variables. Throws SupportCapError
/// if the result would exceed support_cap() points.
IntDist convolve(const IntDist& a, const IntDist& b);

/// Law of X + c.
IntDist shift(const IntDist& d, std::int64_t c);

/// Conditional law given the represented window: weights rescaled to total
/// mass one, tail_mass dropped.
IntDist renormalize(const IntDist& d);

/// Total variation distance over the represented supports: half the
/// pointwise L1 difference. Truncation slack is reported separately by
/// tv_tail_slack, never folded in.
double tv_distance(const IntDist& a, const IntDist& b);

/// Conservative slack on tv_distance from truncated tails.
double tv_tail_slack(const IntDist& a, const IntDist& b);

double max_pmf(const IntDist& d);

/// P(X <= j) of the represented mass.
double cdf(const IntDist& d, std::int64_t j);

/// A bounded function on a window of integers, tabulated as values[k] for
/// the point offset + k and zero outside. Used for characterization and
/// Stein-identity residual checks.
struct FuncTable {
  std::int64_t offset = 0;
  std::vector<double> values;

  double at(std::int64_t j) const {
    if (j < offset) return 0.0;
    const std::int64_t k = j - offset;
    if (k >= static_cast<std::int64_t>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(k)];
  }

  bool covers(std::int64_t lo, std::int64_t hi) const {
    return offset <= lo &&
           offset + static_cast<std::int64_t>(values.size()) > hi;
  }

  double sup_abs() const;
};

}  // namespace dclt
