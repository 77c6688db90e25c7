#include "discrete_clt/zero_bias.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "discrete_clt/stable_sum.hpp"

namespace dclt {

IntDist zero_bias(const IntDist& d) {
  const IntDist y = renormalize(d);
  const double mu = mean(y);
  const double s2 = variance(y);
  if (!(s2 > 0.0)) {
    throw std::invalid_argument("zero_bias: undefined for point masses");
  }
  const std::int64_t lo = y.min_support();
  const std::int64_t hi = y.max_support();
  // Backward pass accumulates E[(Y - mu) 1(Y >= j)]; the result for j lands
  // at j - 1, so the output spans [lo, hi - 1].
  std::vector<double> out(static_cast<std::size_t>(hi - lo), 0.0);
  StableSum partial;
  for (std::int64_t j = hi; j >= lo + 1; --j) {
    partial.add((static_cast<double>(j) - mu) * y.pmf(j));
    double v = partial.value() / s2;
    if (v < 0.0) {
      if (v < -1e-14) {
        throw std::logic_error("zero_bias: negative mass beyond rounding");
      }
      v = 0.0;
    }
    out[static_cast<std::size_t>(j - 1 - lo)] = v;
  }
  return IntDist::from_parts(lo, std::move(out), 0.0);
}

double verify_characterization(const IntDist& d, const FuncTable& f) {
  const IntDist y = renormalize(d);
  const IntDist ystar = zero_bias(y);
  if (!f.covers(y.min_support(), y.max_support()) ||
      !f.covers(ystar.min_support(), ystar.max_support() + 1)) {
    throw std::invalid_argument(
        "verify_characterization: table does not cover the required window");
  }
  const double mu = mean(y);
  const double s2 = variance(y);
  StableSum lhs;
  for (std::int64_t j = y.min_support(); j <= y.max_support(); ++j) {
    lhs.add((static_cast<double>(j) - mu) * y.pmf(j) * f.at(j));
  }
  StableSum rhs;
  for (std::int64_t j = ystar.min_support(); j <= ystar.max_support(); ++j) {
    rhs.add(ystar.pmf(j) * (f.at(j + 1) - f.at(j)));
  }
  return std::abs(lhs.value() - s2 * rhs.value());
}

IntDist size_bias(const IntDist& d) {
  if (d.min_support() < 0) {
    throw std::invalid_argument("size_bias: support must be nonnegative");
  }
  const IntDist y = renormalize(d);
  const double mu = mean(y);
  if (!(mu > 0.0)) {
    throw std::invalid_argument("size_bias: mean must be positive");
  }
  const std::int64_t lo = std::max<std::int64_t>(y.min_support(), 1);
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(y.max_support() - lo + 1));
  for (std::int64_t k = lo; k <= y.max_support(); ++k) {
    w.push_back(static_cast<double>(k) * y.pmf(k) / mu);
  }
  return IntDist::from_parts(lo, std::move(w), 0.0);
}

ComponentSet make_component_set(std::vector<IntDist> components) {
  if (components.empty()) {
    throw std::invalid_argument("component set: at least one component");
  }
  ComponentSet cs;
  cs.components = std::move(components);
  StableSum m, v;
  for (const IntDist& c : cs.components) {
    cs.means.push_back(mean(c));
    cs.variances.push_back(variance(c));
    m.add(cs.means.back());
    v.add(cs.variances.back());
  }
  cs.total_mean = m.value();
  cs.total_variance = v.value();
  if (!(cs.total_variance > 0.0)) {
    throw std::invalid_argument("component set: all components degenerate");
  }
  return cs;
}

IntDist convolve_all(const ComponentSet& cs) {
  IntDist acc = cs.components.front();
  for (std::size_t i = 1; i < cs.size(); ++i) {
    acc = convolve(acc, cs.components[i]);
  }
  return acc;
}

IntDist leave_one_out(const ComponentSet& cs, std::size_t i) {
  if (i >= cs.size()) {
    throw std::out_of_range("leave_one_out: index out of range");
  }
  IntDist acc = IntDist::point_mass(0);
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k != i) acc = convolve(acc, cs.components[k]);
  }
  return acc;
}

IntDist mix(const std::vector<std::pair<double, IntDist>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mix: no parts");
  std::int64_t lo = parts.front().second.min_support();
  std::int64_t hi = parts.front().second.max_support();
  for (const auto& [lambda, part] : parts) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("mix: negative weight");
    lo = std::min(lo, part.min_support());
    hi = std::max(hi, part.max_support());
  }
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::int64_t j = lo; j <= hi; ++j) {
    StableSum acc;
    for (const auto& [lambda, part] : parts) {
      acc.add(lambda * part.pmf(j));
    }
    w[static_cast<std::size_t>(j - lo)] = acc.value();
  }
  StableSum tail;
  for (const auto& [lambda, part] : parts) tail.add(lambda * part.tail_mass());
  return IntDist::from_parts(lo, std::move(w), tail.value());
}

IntDist sum_zero_bias(const ComponentSet& cs) {
  // Prefix/suffix convolutions make every leave-one-out law available in two
  // passes instead of n full products.
  const std::size_t n = cs.size();
  std::vector<IntDist> prefix, suffix;
  prefix.reserve(n + 1);
  suffix.resize(n + 1, IntDist::point_mass(0));
  prefix.push_back(IntDist::point_mass(0));
  for (std::size_t i = 0; i < n; ++i) {
    prefix.push_back(convolve(prefix.back(), cs.components[i]));
  }
  for (std::size_t i = n; i-- > 0;) {
    suffix[i] = convolve(cs.components[i], suffix[i + 1]);
  }
  std::vector<std::pair<double, IntDist>> parts;
  for (std::size_t i = 0; i < n; ++i) {
    if (cs.variances[i] == 0.0) continue;  // replacement weight vanishes
    const IntDist wi = convolve(prefix[i], suffix[i + 1]);
    parts.emplace_back(cs.variances[i] / cs.total_variance,
                       convolve(wi, zero_bias(cs.components[i])));
  }
  return mix(parts);
}

Coupling optimal_coupling(const IntDist& a, const IntDist& b) {
  Coupling c{{}, renormalize(a), renormalize(b)};
  const auto& wa = c.marginal_x.weights();
  const auto& wb = c.marginal_y.weights();
  std::size_t ia = 0, ib = 0;
  double ra = wa[0], rb = wb[0];
  while (ia < wa.size() && ib < wb.size()) {
    const double m = std::min(ra, rb);
    if (m > 0.0) {
      c.cells.push_back({c.marginal_x.offset() + static_cast<std::int64_t>(ia),
                         c.marginal_y.offset() + static_cast<std::int64_t>(ib),
                         m});
    }
    ra -= m;
    rb -= m;
    if (ra <= 0.0) {
      ++ia;
      if (ia < wa.size()) ra = wa[ia];
    }
    if (rb <= 0.0) {
      ++ib;
      if (ib < wb.size()) rb = wb[ib];
    }
  }
  return c;
}

double coupling_cost(const Coupling& c, std::int64_t shift, double cap) {
  if (!(cap >= 0.0)) throw std::invalid_argument("coupling_cost: negative cap");
  StableSum acc;
  for (const auto& cell : c.cells) {
    const double diff =
        std::abs(static_cast<double>(cell.x - cell.y - shift));
    acc.add(cell.p * std::min(diff, cap));
  }
  return acc.value();
}

double coupling_tail(const Coupling& c, std::int64_t shift, double cap) {
  StableSum acc;
  for (const auto& cell : c.cells) {
    const double diff =
        std::abs(static_cast<double>(cell.x - cell.y - shift));
    if (diff > cap) acc.add(cell.p);
  }
  return acc.value();
}

double wasserstein1(const IntDist& a, const IntDist& b) {
  const IntDist x = renormalize(a);
  const IntDist y = renormalize(b);
  const std::int64_t lo = std::min(x.min_support(), y.min_support());
  const std::int64_t hi = std::max(x.max_support(), y.max_support());
  StableSum fx, fy, acc;
  for (std::int64_t j = lo; j < hi; ++j) {
    fx.add(x.pmf(j));
    fy.add(y.pmf(j));
    acc.add(std::abs(fx.value() - fy.value()));
  }
  return acc.value();
}

}  // namespace dclt
