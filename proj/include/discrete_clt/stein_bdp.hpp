#pragma once

// Bilateral birth-death machinery tied to the family: jump rates, detailed
// balance, closed-form solutions of the Stein equation with their factor
// bounds, occupation-time formulas, and a Monte Carlo simulator used purely
// as a cross-check oracle.

#include <cstdint>
#include <limits>
#include <vector>

#include "discrete_clt/int_dist.hpp"
#include "discrete_clt/psi_family.hpp"

namespace dclt {

struct BDRates {
  PsiParams params;

  // Birth rate: sigma2 above the junction, sigma2 + mu - i below it.
  double alpha(std::int64_t i) const {
    return i >= params.kappa
               ? params.sigma2
               : params.sigma2 + (params.mu - static_cast<double>(i));
  }

  // Death rate: sigma2 + i - mu above the junction, sigma2 below it.
  double beta(std::int64_t i) const {
    return i >= params.kappa
               ? params.sigma2 + (static_cast<double>(i) - params.mu)
               : params.sigma2;
  }
};

BDRates rates(const PsiParams& p);

// Max relative residual of alpha_i pi_i = beta_{i+1} pi_{i+1} over the
// represented window. The second form checks a supplied pmf against the
// rates, e.g. to detect a perturbed table.
double check_balance(const PsiParams& p);
double check_balance(const PsiParams& p, const IntDist& pi);

// A finite set of integers, or the complement of one.
struct TargetSet {
  std::vector<std::int64_t> members;  // sorted, unique
  bool complement = false;

  static TargetSet finite(std::vector<std::int64_t> members);
  static TargetSet cofinite(std::vector<std::int64_t> excluded);
  bool contains(std::int64_t j) const;
};

// Tabulated solution of the Stein equation for a target set: f on
// [window_lo, window_hi], its forward differences, and the cumulative sums g
// (anchored at g(window_lo) = 0, determined up to an additive constant).
struct SteinTable {
  PsiParams params;
  TargetSet target;
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  std::vector<double> f;        // f(i), i in [window_lo, window_hi]
  std::vector<double> delta_f;  // f(i+1) - f(i), i in [window_lo, window_hi-1]
  std::vector<double> g;        // g(i), i in [window_lo, window_hi]
  double prob_target = 0.0;     // P(S in A) over the represented window

  double f_at(std::int64_t i) const {
    return f[static_cast<std::size_t>(i - window_lo)];
  }
  double delta_at(std::int64_t i) const {
    return delta_f[static_cast<std::size_t>(i - window_lo)];
  }
  double g_at(std::int64_t i) const {
    return g[static_cast<std::size_t>(i - window_lo)];
  }
  // h(i) = 1(i in A) - P(S in A)
  double h_at(std::int64_t i) const {
    return (target.contains(i) ? 1.0 : 0.0) - prob_target;
  }
};

// Closed-form solution; cofinite targets via the antisymmetry f_{Z\A} = -f_A.
// Finite members (or exclusions) must lie inside the represented window.
SteinTable stein_solution(const PsiParams& p, const TargetSet& A);

// Max over interior i of |alpha_i (g(i+1)-g(i)) + beta_i (g(i-1)-g(i)) - h(i)|.
double max_stein_residual(const SteinTable& t);

struct SteinFactorCheck {
  double max_ratio = 0.0;       // |df| against the sharp three-way bound
  double max_ratio_weak = 0.0;  // |df| against (1 - pi_i) / sigma2
  double max_delta_f = 0.0;     // |df| at the sharp argmax
  double bound_at_max = 0.0;    // sharp bound there
  bool holds = false;           // max_ratio <= 1 + 1e-10
};

// Checks |df_A(i)| <= (1-pi_i)/(alpha_i ^ beta_i) ^ 1/alpha_i ^ 1/beta_i on
// every index where the truncation noise is below 1e-10 of the bound (the
// noise allowance is added to |df| first, so the check errs toward failing).
// Refuses non-default kappa: the bound is not established there.
SteinFactorCheck stein_factor_check(const PsiParams& p, const TargetSet& A);

enum class Direction { up, down };

inline constexpr std::int64_t kMinusInf = std::numeric_limits<std::int64_t>::min();
inline constexpr std::int64_t kPlusInf = std::numeric_limits<std::int64_t>::max();

// Expected time spent in [k1, k2] by the process started at i before first
// hitting i-1 (down) or i+1 (up). k1 = kMinusInf / k2 = kPlusInf give the
// full-line sums, whose [k1,k2] = (-inf,inf) case is the expected hitting
// time itself. Requires the ergodic regime.
double occupation_time(const PsiParams& p, std::int64_t i, Direction dir,
                       std::int64_t k1, std::int64_t k2);

struct BDPSimConfig {
  std::uint64_t seed = 1;
  std::int64_t replicas = 1;
  std::int64_t start_state = 0;
  enum class Stop { hit_down, hit_up, fixed_horizon } stop = Stop::hit_down;
  double horizon = 0.0;              // fixed_horizon only
  std::int64_t k1 = kMinusInf;       // occupation window
  std::int64_t k2 = kPlusInf;
  std::int64_t state_cap = 10'000;   // abort when |state - kappa| exceeds this
};

struct SimResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  std::int64_t replicas = 0;
};

// Monte Carlo: mean time in [k1, k2] before the stop rule fires, or the
// occupied fraction of the horizon for fixed_horizon. Deterministic given
// the seed; replicas use independently derived streams combined in fixed
// order.
SimResult bdp_simulate(const PsiParams& p, const BDPSimConfig& cfg);

}  // namespace dclt
