#pragma once

// The two-parameter integer-supported approximating family: stationary pmf,
// moment identities, its zero-bias law, and the comparison baselines
// (truncated near-fixed-point / translated Poisson, integerized normal).

#include <cstdint>

#include "discrete_clt/int_dist.hpp"

namespace dclt {

// min{i : i >= x}
std::int64_t ceil_int(double x);

struct PsiParams {
  double mu = 0.0;
  double sigma2 = 1.0;
  std::int64_t kappa = 0;
  double eps = 1e-15;  // tail truncation tolerance
  // mu - sigma2 < kappa; at equality (integer boundary) the lower death rate
  // vanishes and the chain is only null-recurrent below kappa.
  bool ergodic = true;
  // kappa == min{i : i >= mu}; the Stein factor bounds are proved only here.
  bool default_kappa = true;
};

std::int64_t default_kappa(double mu);
PsiParams make_psi_params(double mu, double sigma2);
PsiParams make_psi_params(double mu, double sigma2, std::int64_t kappa,
                          double eps = 1e-15);

// Stationary pmf pi; window grown from kappa until terms fall below
// eps * pi_kappa on each side, unrepresented mass covered by tail_mass.
IntDist psi_pmf(const PsiParams& p);

struct PsiMoments {
  double mean = 0.0;
  double variance = 0.0;
  double pi_kappa = 0.0;
};

PsiMoments psi_moments(const PsiParams& p);

// Exact variance in terms of pi_kappa: sigma2 + (sigma2 + kappa - mu) * pi_kappa.
double psi_var_formula(const PsiParams& p, double pi_kappa);

// The zero-bias law of the family member: sigma2*pi_j/Var for j >= kappa,
// 1 - sigma2/Var at kappa-1, sigma2*pi_{j+1}/Var for j <= kappa-2.
IntDist psi_zero_bias(const PsiParams& p);

struct TruncatedFixedPoint {
  double mu = 0.0;
  double sigma2 = 1.0;
  std::int64_t kappa_tilde = 0;  // min{i : i >= mu - sigma2}
};

TruncatedFixedPoint make_truncated_fixed_point(double mu, double sigma2);

// Near-fixed-point law supported on [kappa_tilde, inf); exactly a translated
// Poisson when mu - sigma2 is an integer.
IntDist truncated_fixed_point_pmf(const TruncatedFixedPoint& t, double eps);

// Integerized normal: P(Y = j) = P(j - 1/2 < Z <= j + 1/2).
IntDist discrete_normal_pmf(double mu, double sigma2, double eps);

}  // namespace dclt
