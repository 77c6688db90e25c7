#include "discrete_clt/psi_family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "discrete_clt/stable_sum.hpp"

namespace dclt {

std::int64_t ceil_int(double x) {
  return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t default_kappa(double mu) { return ceil_int(mu); }

namespace {

void validate(const PsiParams& p) {
  if (!(p.sigma2 > 0.0)) {
    throw std::invalid_argument("psi: sigma2 must be positive");
  }
  if (!(p.eps > 0.0 && p.eps < 1.0)) {
    throw std::invalid_argument("psi: eps must lie in (0, 1)");
  }
  const double k = static_cast<double>(p.kappa);
  if (!(p.mu - p.sigma2 <= k && k < p.mu + p.sigma2 + 1.0)) {
    throw std::invalid_argument(
        "psi: kappa outside the operator domain [mu - sigma2, mu + sigma2 + 1)");
  }
}

// Terms above `base` for the upward recursion t_j = t_{j-1} * s2/(s2 + j - mu),
// starting from the value `anchor` at index `base`. Returns a bound on the
// unrepresented upper mass (same scale): past the last kept index J every
// further ratio is at most q = s2/(J+1-base), since s2/(s2 + i - mu) <=
// s2/(i - base) whenever base >= mu - s2. Rescales everything when terms
// threaten to overflow; on_rescale(by) lets the caller keep companion state
// on the common scale.
template <typename Rescale>
double grow_upper(double& anchor, std::int64_t base, double mu, double s2,
                  double eps, std::int64_t budget, std::vector<double>& up,
                  Rescale on_rescale) {
  double t = anchor;
  for (std::int64_t j = base + 1;; ++j) {
    t *= s2 / (s2 + (static_cast<double>(j) - mu));
    if (t == 0.0) return 0.0;  // below subnormals: nothing representable left
    if (t > 1e250) {
      const double by = t;
      anchor /= by;
      for (double& x : up) x /= by;
      on_rescale(by);
      t = 1.0;
    }
    up.push_back(t);
    if (static_cast<std::int64_t>(up.size()) > budget) {
      throw SupportCapError("distribution window exceeds the support cap");
    }
    const double q = s2 / static_cast<double>(j + 1 - base);
    if (t < eps * anchor && q <= 0.5) return t * q / (1.0 - q);
  }
}

}  // namespace

PsiParams make_psi_params(double mu, double sigma2) {
  return make_psi_params(mu, sigma2, default_kappa(mu));
}

PsiParams make_psi_params(double mu, double sigma2, std::int64_t kappa,
                          double eps) {
  PsiParams p;
  p.mu = mu;
  p.sigma2 = sigma2;
  p.kappa = kappa;
  p.eps = eps;
  p.ergodic = mu - sigma2 < static_cast<double>(kappa);
  p.default_kappa = kappa == default_kappa(mu);
  validate(p);
  return p;
}

IntDist psi_pmf(const PsiParams& p) {
  validate(p);
  const double s2 = p.sigma2;
  const double mu = p.mu;
  const std::int64_t kap = p.kappa;
  const std::int64_t cap = support_cap();

  double anchor = 1.0;  // pre-normalization term at kappa
  std::vector<double> up, low;
  double tail_low = 0.0;

  double tail_up = grow_upper(anchor, kap, mu, s2, p.eps, cap, up,
                              [](double) {});

  // Downward: the junction step t_{kappa-1} = t_kappa * (s2+kappa-mu)/
  // (s2+mu-kappa+1), then t_{i} = t_{i+1} * s2/(s2 + mu - i). Past the last
  // kept index I every further ratio is at most q = s2/(kappa - I), since
  // s2/(s2 + mu - i) <= s2/(kappa - 1 - i) whenever kappa < mu + s2 + 1.
  {
    const double c = std::max(s2 + (static_cast<double>(kap) - mu), 0.0);
    double t = anchor * (c / (s2 + mu - static_cast<double>(kap) + 1.0));
    for (std::int64_t i = kap - 1;; --i) {
      if (t == 0.0) break;
      if (t > 1e250) {
        const double by = t;
        anchor /= by;
        for (double& x : up) x /= by;
        for (double& x : low) x /= by;
        tail_up /= by;
        t = 1.0;
      }
      low.push_back(t);
      if (static_cast<std::int64_t>(up.size() + low.size()) + 1 > cap) {
        throw SupportCapError("distribution window exceeds the support cap");
      }
      const double q = s2 / static_cast<double>(kap - i);
      if (t < p.eps * anchor && q <= 0.5) {
        tail_low = t * q / (1.0 - q);
        break;
      }
      t *= s2 / (s2 + (mu - static_cast<double>(i - 1)));
    }
  }

  const std::int64_t lo_idx = kap - static_cast<std::int64_t>(low.size());
  std::vector<double> w;
  w.reserve(low.size() + 1 + up.size());
  w.insert(w.end(), low.rbegin(), low.rend());
  w.push_back(anchor);
  w.insert(w.end(), up.begin(), up.end());

  StableSum tot;
  for (double x : w) tot.add(x);
  tot.add(tail_low);
  tot.add(tail_up);
  const double denom = tot.value();
  for (double& x : w) x /= denom;
  return IntDist::from_parts(lo_idx, std::move(w),
                             (tail_low + tail_up) / denom);
}

PsiMoments psi_moments(const PsiParams& p) {
  const IntDist d = psi_pmf(p);
  return {mean(d), variance(d), d.pmf(p.kappa)};
}

double psi_var_formula(const PsiParams& p, double pi_kappa) {
  const double c = std::max(p.sigma2 + (static_cast<double>(p.kappa) - p.mu), 0.0);
  return p.sigma2 + c * pi_kappa;
}

IntDist psi_zero_bias(const PsiParams& p) {
  const IntDist pi = psi_pmf(p);
  const double r = p.sigma2 / psi_var_formula(p, pi.pmf(p.kappa));
  const std::int64_t lo = pi.min_support();
  const std::int64_t hi = pi.max_support();
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 2), 0.0);
  auto at = [&](std::int64_t j) -> double& {
    return w[static_cast<std::size_t>(j - (lo - 1))];
  };
  for (std::int64_t j = p.kappa; j <= hi; ++j) at(j) = r * pi.pmf(j);
  at(p.kappa - 1) = 1.0 - r;
  for (std::int64_t j = lo - 1; j <= p.kappa - 2; ++j) at(j) = r * pi.pmf(j + 1);
  return IntDist::from_parts(lo - 1, std::move(w), r * pi.tail_mass());
}

TruncatedFixedPoint make_truncated_fixed_point(double mu, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("truncated fixed point: sigma2 must be positive");
  }
  return {mu, sigma2, ceil_int(mu - sigma2)};
}

IntDist truncated_fixed_point_pmf(const TruncatedFixedPoint& t, double eps) {
  if (!(t.sigma2 > 0.0)) {
    throw std::invalid_argument("truncated fixed point: sigma2 must be positive");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("truncated fixed point: eps must lie in (0, 1)");
  }
  double anchor = 1.0;
  std::vector<double> up;
  const double tail = grow_upper(anchor, t.kappa_tilde, t.mu, t.sigma2, eps,
                                 support_cap(), up, [](double) {});
  std::vector<double> w;
  w.reserve(1 + up.size());
  w.push_back(anchor);
  w.insert(w.end(), up.begin(), up.end());
  StableSum tot;
  for (double x : w) tot.add(x);
  tot.add(tail);
  const double denom = tot.value();
  for (double& x : w) x /= denom;
  return IntDist::from_parts(t.kappa_tilde, std::move(w), tail / denom);
}

IntDist discrete_normal_pmf(double mu, double sigma2, double eps) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("discrete normal: sigma2 must be positive");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("discrete normal: eps must lie in (0, 1)");
  }
  const double inv = 1.0 / std::sqrt(2.0 * sigma2);
  auto upper = [&](double x) { return 0.5 * std::erfc((x - mu) * inv); };
  auto lower = [&](double x) { return 0.5 * std::erfc((mu - x) * inv); };
  // Cell (j-1/2, j+1/2], evaluated from the nearer tail to keep precision.
  auto cell = [&](std::int64_t j) {
    const double a = static_cast<double>(j) - 0.5;
    const double b = static_cast<double>(j) + 0.5;
    return static_cast<double>(j) >= mu ? upper(a) - upper(b)
                                        : lower(b) - lower(a);
  };
  const std::int64_t cap = support_cap();
  std::int64_t jlo = std::llround(mu);
  std::int64_t jhi = jlo;
  const auto guard = [&] {
    if (jhi - jlo + 1 > cap) {
      throw SupportCapError("distribution window exceeds the support cap");
    }
  };
  while (lower(static_cast<double>(jlo) - 0.5) > 0.5 * eps) {
    --jlo;
    guard();
  }
  while (upper(static_cast<double>(jhi) + 0.5) > 0.5 * eps) {
    ++jhi;
    guard();
  }
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(jhi - jlo + 1));
  for (std::int64_t j = jlo; j <= jhi; ++j) w.push_back(cell(j));
  const double tail =
      lower(static_cast<double>(jlo) - 0.5) + upper(static_cast<double>(jhi) + 0.5);
  return IntDist::from_parts(jlo, std::move(w), tail);
}

}  // namespace dclt
