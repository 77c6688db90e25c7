#pragma once

#include <cmath>

namespace dclt {

// Neumaier-compensated accumulator. All mass totals, moments and cumulative
// sums in the library go through this so that results are deterministic and
// accurate to a few ulps regardless of support size.
class StableSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <typename It, typename Fn>
double stable_accumulate(It first, It last, Fn fn) {
  StableSum acc;
  for (; first != last; ++first) acc.add(fn(*first));
  return acc.value();
}

}  // namespace dclt
