#include "discrete_clt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "discrete_clt/stable_sum.hpp"
#include "discrete_clt/zero_bias.hpp"

namespace dclt {

namespace {

constexpr double kVacuousSlack = 1e-12;

double two_sum_split(const IntDist& y, const IntDist& ystar,
                     std::int64_t kappa) {
  StableSum acc;
  for (std::int64_t i = y.min_support(); i <= y.max_support(); ++i) {
    if (i >= kappa) {
      acc.add(std::abs(y.pmf(i) - ystar.pmf(i)));
    } else {
      acc.add(std::abs(y.pmf(i) - ystar.pmf(i - 1)));
    }
  }
  return acc.value();
}

}  // namespace

double thm41_bound(const IntDist& y, std::int64_t kappa) {
  const IntDist yn = renormalize(y);
  return two_sum_split(yn, zero_bias(yn), kappa);
}

double thm41_bound(const IntDist& y) {
  return thm41_bound(y, ceil_int(mean(renormalize(y))));
}

double dplus_exact(const ComponentSet& cs, std::size_t i) {
  if (i >= cs.size()) {
    throw std::out_of_range("dplus_exact: component index out of range");
  }
  const IntDist wi = leave_one_out(cs, i);
  return tv_distance(wi, shift(wi, 1));
}

double thm42_bound(const ComponentSet& cs, double K) {
  if (!(K > 0.0)) {
    throw std::invalid_argument("thm42_bound: K must be positive");
  }
  if (!(cs.total_variance > 0.0)) {
    throw std::invalid_argument("thm42_bound: no component carries variance");
  }
  StableSum acc;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs.variances[i] == 0.0) continue;  // deterministic shift, zero weight
    const IntDist star = zero_bias(cs.components[i]);
    const Coupling c = optimal_coupling(cs.components[i], star);
    const double dp = dplus_exact(cs, i);
    const double smoothed =
        dp * (coupling_cost(c, 0, K) + coupling_cost(c, 1, K));
    const double tails = coupling_tail(c, 0, K) + coupling_tail(c, 1, K);
    acc.add(cs.variances[i] * (smoothed + tails));
  }
  return 2.0 * acc.value() / cs.total_variance;
}

double thm42_bound(const ComponentSet& cs) {
  return thm42_bound(cs, std::numeric_limits<double>::infinity());
}

Prop44Estimate dplus_prop44(const ComponentSet& cs) {
  Prop44Estimate out;
  out.u.reserve(cs.size());
  StableSum total;
  for (const IntDist& xi : cs.components) {
    const double ui = 1.0 - tv_distance(xi, shift(xi, 1));
    out.u.push_back(ui);
    total.add(std::min(ui, 0.5));
  }
  out.U = total.value();
  if (out.U > kVacuousSlack) out.bound_w = 1.0 / std::sqrt(out.U);
  if (out.U > 1.0 + kVacuousSlack) out.bound_wi = 1.0 / std::sqrt(out.U - 1.0);
  return out;
}

Cor43Result cor43_bound(const std::vector<double>& ps) {
  if (ps.size() < 2) {
    throw std::invalid_argument("cor43_bound: need at least two indicators");
  }
  StableSum sigma2;
  double worst = 0.0;
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("cor43_bound: every p must lie in (0,1)");
    }
    const double v = p * (1.0 - p);
    sigma2.add(v);
    worst = std::max(worst, v);
  }
  const double vartheta2 = sigma2.value() - worst;
  if (!(vartheta2 > 0.0)) {
    throw std::domain_error("cor43_bound: vartheta^2 is not positive");
  }
  return Cor43Result{1.0 / std::sqrt(vartheta2), vartheta2};
}

BoundReport bound_report(const ComponentSet& cs, const BoundOptions& opt) {
  const IntDist w = convolve_all(cs);
  const PsiParams p =
      make_psi_params(cs.total_mean, cs.total_variance,
                      default_kappa(cs.total_mean), opt.eps);
  BoundReport rep;
  rep.mu = p.mu;
  rep.sigma2 = p.sigma2;
  rep.kappa = p.kappa;

  StableSum slack;
  for (const IntDist& xi : cs.components) slack.add(xi.tail_mass());
  slack.add(w.tail_mass());

  const IntDist s = psi_pmf(p);
  slack.add(s.tail_mass());
  rep.actual_tv = tv_distance(w, s);

  rep.thm41_bound = thm41_bound(w);
  rep.thm42_bound = thm42_bound(cs, opt.K);
  rep.dplus_exact.reserve(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    rep.dplus_exact.push_back(dplus_exact(cs, i));
  }

  const bool indicators =
      cs.size() >= 2 &&
      std::all_of(cs.components.begin(), cs.components.end(),
                  [](const IntDist& xi) {
                    return xi.min_support() == 0 && xi.max_support() == 1;
                  });
  if (indicators) {
    std::vector<double> ps;
    ps.reserve(cs.size());
    for (const IntDist& xi : cs.components) ps.push_back(xi.pmf(1));
    rep.cor43_bound = cor43_bound(ps).bound;
  }

  const Prop44Estimate pe = dplus_prop44(cs);
  rep.dplus_prop44 = pe.bound_wi;
  rep.periodic = std::all_of(pe.u.begin(), pe.u.end(), [](double ui) {
    return ui <= kVacuousSlack;
  });

  const IntDist dn = discrete_normal_pmf(p.mu, p.sigma2, opt.eps);
  slack.add(dn.tail_mass());
  rep.baselines["discrete_normal"] = tv_distance(w, dn);

  const IntDist tp =
      truncated_fixed_point_pmf(make_truncated_fixed_point(p.mu, p.sigma2),
                                opt.eps);
  slack.add(tp.tail_mass());
  rep.baselines["translated_poisson"] = tv_distance(w, tp);

  rep.tail_slack = slack.value();
  return rep;
}

}  // namespace dclt
