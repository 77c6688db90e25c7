#include "discrete_clt/stein_bdp.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "discrete_clt/int_dist.hpp"
#include "discrete_clt/psi_family.hpp"
#include "discrete_clt/stable_sum.hpp"
#include "doctest.h"

using namespace dclt;

namespace {

PsiParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> mu(-4.0, 4.0);
  std::uniform_real_distribution<double> s2(0.3, 9.0);
  return make_psi_params(mu(gen), s2(gen));
}

TargetSet random_target(std::mt19937_64& gen, const PsiParams& p) {
  const std::int64_t radius =
      static_cast<std::int64_t>(std::ceil(2.0 * std::sqrt(p.sigma2))) + 1;
  std::uniform_int_distribution<std::int64_t> pick(p.kappa - radius,
                                                   p.kappa + radius);
  std::uniform_int_distribution<int> size(1, 5);
  std::vector<std::int64_t> members;
  const int n = size(gen);
  for (int k = 0; k < n; ++k) members.push_back(pick(gen));
  return gen() % 4 == 0 ? TargetSet::cofinite(members)
                        : TargetSet::finite(members);
}

}  // namespace

TEST_CASE("jump rates match the two branches") {
  const PsiParams p = make_psi_params(0.3, 2.0);
  REQUIRE(p.kappa == 1);
  const BDRates r = rates(p);
  CHECK(r.alpha(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.alpha(0) == doctest::Approx(2.3).epsilon(1e-15));
  CHECK(r.beta(1) == doctest::Approx(2.7).epsilon(1e-15));
  CHECK(r.beta(0) == doctest::Approx(2.0).epsilon(1e-15));

  SUBCASE("boundary kappa kills the death rate at the junction") {
    const PsiParams b = make_psi_params(2.0, 2.0, 0);
    CHECK_FALSE(b.ergodic);
    CHECK(rates(b).beta(0) == 0.0);
  }

  SUBCASE("default kappa keeps alpha nonincreasing and beta nondecreasing") {
    const PsiParams q = make_psi_params(-1.7, 3.1);
    const IntDist pi = psi_pmf(q);
    const BDRates rr = rates(q);
    for (std::int64_t i = pi.min_support(); i < pi.max_support(); ++i) {
      CHECK(rr.alpha(i + 1) <= rr.alpha(i));
      CHECK(rr.beta(i + 1) >= rr.beta(i));
    }
    CHECK(rr.alpha(q.kappa) == q.sigma2);
    CHECK(rr.beta(q.kappa - 1) == q.sigma2);
  }
}

TEST_CASE("detailed balance detector") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 12; ++trial) {
    const PsiParams p = random_params(gen);
    CHECK(check_balance(p) < 1e-12);
  }

  SUBCASE("a perturbed table is flagged") {
    const PsiParams p = make_psi_params(1.4, 2.2);
    const IntDist pi = psi_pmf(p);
    std::vector<double> w(pi.weights());
    w[w.size() / 2] *= 1.01;
    StableSum total;
    for (double x : w) total.add(x);
    for (double& x : w) x /= total.value();
    const IntDist bad = IntDist::from_pmf(pi.min_support(), w);
    CHECK(check_balance(p, bad) > 1e-3);
  }
}

TEST_CASE("target sets normalize and answer membership") {
  const TargetSet a = TargetSet::finite({3, 1, 3, -2});
  CHECK(a.members == std::vector<std::int64_t>{-2, 1, 3});
  CHECK(a.contains(3));
  CHECK_FALSE(a.contains(0));
  const TargetSet b = TargetSet::cofinite({5});
  CHECK(b.contains(0));
  CHECK_FALSE(b.contains(5));
}

TEST_CASE("stein solution for the full line vanishes") {
  const PsiParams p = make_psi_params(0.7, 1.5);
  const SteinTable t = stein_solution(p, TargetSet::cofinite({}));
  for (double v : t.f) CHECK(v == 0.0);
  CHECK(t.prob_target == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stein solution signs for a singleton target") {
  const PsiParams p = make_psi_params(1.3, 2.8);
  const IntDist pi = psi_pmf(p);
  for (std::int64_t j : {p.kappa - 2, p.kappa, p.kappa + 3}) {
    const SteinTable t = stein_solution(p, TargetSet::finite({j}));
    for (std::int64_t i = pi.min_support() + 1; i <= pi.max_support(); ++i) {
      if (i <= j) {
        CHECK(t.f_at(i) < 0.0);
      } else {
        CHECK(t.f_at(i) > 0.0);
      }
    }
    CHECK(t.f_at(pi.min_support()) == 0.0);
  }
}

TEST_CASE("stein equation residual on the symmetric unit law") {
  const PsiParams p = make_psi_params(0.0, 1.0, 0, 1e-26);
  REQUIRE(p.default_kappa);
  const SteinTable t = stein_solution(p, TargetSet::finite({0}));
  REQUIRE(t.window_lo <= -21);
  REQUIRE(t.window_hi >= 21);
  const BDRates r = rates(p);
  for (std::int64_t i = -20; i <= 20; ++i) {
    const double res = r.alpha(i) * (t.g_at(i + 1) - t.g_at(i)) +
                       r.beta(i) * (t.g_at(i - 1) - t.g_at(i)) - t.h_at(i);
    CHECK(std::abs(res) < 1e-10);
  }
}

TEST_CASE("stein equation residual across random targets") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const PsiParams p = random_params(gen);
    const SteinTable t = stein_solution(p, random_target(gen, p));
    CHECK(max_stein_residual(t) < 1e-10);
  }
}

TEST_CASE("complement targets negate the solution") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const PsiParams p = random_params(gen);
    std::vector<std::int64_t> members{p.kappa, p.kappa + 2};
    const SteinTable a = stein_solution(p, TargetSet::finite(members));
    const SteinTable b = stein_solution(p, TargetSet::cofinite(members));
    REQUIRE(a.f.size() == b.f.size());
    for (std::size_t k = 0; k < a.f.size(); ++k) {
      CHECK(b.f[k] == doctest::Approx(-a.f[k]).epsilon(1e-12));
    }
    CHECK(a.prob_target + b.prob_target ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stein solution rejects bad inputs") {
  const PsiParams p = make_psi_params(0.5, 1.0);
  CHECK_THROWS_AS(stein_solution(p, TargetSet::finite({1000000})),
                  std::invalid_argument);
  const PsiParams boundary = make_psi_params(2.0, 2.0, 0);
  CHECK_THROWS_AS(stein_solution(boundary, TargetSet::finite({0})),
                  std::invalid_argument);
}

TEST_CASE("difference signs: singleton targets concentrate the increment") {
  const PsiParams p = make_psi_params(-0.4, 3.3);
  const IntDist pi = psi_pmf(p);
  for (std::int64_t j : {p.kappa - 3, p.kappa + 1}) {
    const SteinTable t = stein_solution(p, TargetSet::finite({j}));
    for (std::int64_t i = t.window_lo; i < t.window_hi; ++i) {
      if (i == j) {
        CHECK(t.delta_at(i) > 0.0);
      } else {
        CHECK(t.delta_at(i) <= 1e-14);
      }
    }
  }
}

TEST_CASE("difference of a general solution is dominated by the diagonal") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const PsiParams p = random_params(gen);
    const SteinTable t = stein_solution(p, random_target(gen, p));
    // Only probe where the singleton diagonal is well resolved.
    const std::int64_t radius =
        static_cast<std::int64_t>(std::ceil(3.0 * std::sqrt(p.sigma2)));
    for (std::int64_t i = std::max(t.window_lo, p.kappa - radius);
         i < std::min(t.window_hi, p.kappa + radius); ++i) {
      const SteinTable diag = stein_solution(p, TargetSet::finite({i}));
      CHECK(t.delta_at(i) <= diag.delta_at(i) * (1.0 + 1e-10) + 1e-14);
    }
  }
}

TEST_CASE("factor bounds hold across a parameter battery") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 60; ++trial) {
    const PsiParams p = random_params(gen);
    const TargetSet A = random_target(gen, p);
    const SteinFactorCheck c = stein_factor_check(p, A);
    CHECK(c.holds);
    CHECK(c.max_ratio <= 1.0 + 1e-10);
    // The weak envelope is never tighter than the three-way bound.
    CHECK(c.max_ratio_weak <= c.max_ratio * (1.0 + 1e-12));
    CHECK(c.max_delta_f <= c.bound_at_max * (1.0 + 1e-10));
  }

  SUBCASE("non-default junction is refused") {
    const PsiParams p = make_psi_params(0.5, 2.0, 2);
    REQUIRE_FALSE(p.default_kappa);
    CHECK_THROWS_AS(stein_factor_check(p, TargetSet::finite({0})),
                    std::invalid_argument);
  }
}

TEST_CASE("occupation time closed forms") {
  const PsiParams p = make_psi_params(0.3, 2.0);
  const IntDist pi = psi_pmf(p);
  const BDRates r = rates(p);

  SUBCASE("zero when the window cannot be reached before stopping") {
    CHECK(occupation_time(p, 3, Direction::down, -5, 2) == 0.0);
    CHECK(occupation_time(p, -1, Direction::up, 0, 4) == 0.0);
  }

  SUBCASE("full-line sums give expected hitting times") {
    for (std::int64_t i : {p.kappa - 2, p.kappa, p.kappa + 2}) {
      StableSum above, below;
      for (std::int64_t l = i; l <= pi.max_support(); ++l) above.add(pi.pmf(l));
      above.add(pi.tail_mass());
      for (std::int64_t l = pi.min_support(); l <= i; ++l) below.add(pi.pmf(l));
      below.add(pi.tail_mass());
      CHECK(occupation_time(p, i, Direction::down, kMinusInf, kPlusInf) ==
            doctest::Approx(above.value() / (r.beta(i) * pi.pmf(i)))
                .epsilon(1e-12));
      CHECK(occupation_time(p, i, Direction::up, kMinusInf, kPlusInf) ==
            doctest::Approx(below.value() / (r.alpha(i) * pi.pmf(i)))
                .epsilon(1e-12));
    }
  }

  SUBCASE("restricted windows sum only the requested states") {
    const std::int64_t i = p.kappa;
    StableSum part;
    for (std::int64_t l = i; l <= i + 3; ++l) part.add(pi.pmf(l));
    CHECK(occupation_time(p, i, Direction::down, i - 10, i + 3) ==
          doctest::Approx(part.value() / (r.beta(i) * pi.pmf(i)))
              .epsilon(1e-12));
  }

  SUBCASE("bad arguments throw") {
    CHECK_THROWS_AS(occupation_time(p, 0, Direction::down, 3, 1),
                    std::invalid_argument);
    const PsiParams boundary = make_psi_params(2.0, 2.0, 0);
    CHECK_THROWS_AS(
        occupation_time(boundary, 0, Direction::down, kMinusInf, kPlusInf),
        std::invalid_argument);
  }
}

TEST_CASE("simulator reproduces hitting times") {
  const PsiParams p = make_psi_params(0.3, 2.0);
  BDPSimConfig cfg;
  cfg.seed = 99;
  cfg.replicas = 20000;
  cfg.start_state = p.kappa;
  cfg.stop = BDPSimConfig::Stop::hit_down;
  const SimResult res = bdp_simulate(p, cfg);
  const double exact =
      occupation_time(p, p.kappa, Direction::down, kMinusInf, kPlusInf);
  CHECK(res.std_error > 0.0);
  CHECK(std::abs(res.estimate - exact) < 3.0 * res.std_error);

  SUBCASE("upward variant") {
    BDPSimConfig up = cfg;
    up.seed = 100;
    up.start_state = p.kappa - 1;
    up.stop = BDPSimConfig::Stop::hit_up;
    const SimResult r2 = bdp_simulate(p, up);
    const double e2 =
        occupation_time(p, p.kappa - 1, Direction::up, kMinusInf, kPlusInf);
    CHECK(std::abs(r2.estimate - e2) < 3.0 * r2.std_error);
  }

  SUBCASE("restricted window occupation") {
    BDPSimConfig w = cfg;
    w.seed = 101;
    w.k1 = p.kappa;
    w.k2 = p.kappa + 2;
    const SimResult r3 = bdp_simulate(p, w);
    const double e3 =
        occupation_time(p, p.kappa, Direction::down, w.k1, w.k2);
    CHECK(std::abs(r3.estimate - e3) < 3.0 * r3.std_error);
  }
}

TEST_CASE("long-horizon occupation fraction approaches the stationary mass") {
  const PsiParams p = make_psi_params(1.4, 1.1);
  BDPSimConfig cfg;
  cfg.seed = 17;
  cfg.replicas = 200;
  cfg.start_state = p.kappa;
  cfg.stop = BDPSimConfig::Stop::fixed_horizon;
  cfg.horizon = 400.0;
  cfg.k1 = p.kappa;
  cfg.k2 = p.kappa;
  const SimResult res = bdp_simulate(p, cfg);
  const double target = psi_pmf(p).pmf(p.kappa);
  // 3-sigma band plus a small burn-in bias allowance.
  CHECK(std::abs(res.estimate - target) < 3.0 * res.std_error + 5e-3);
}

TEST_CASE("simulator is deterministic and validates its inputs") {
  const PsiParams p = make_psi_params(0.3, 2.0);
  BDPSimConfig cfg;
  cfg.seed = 7;
  cfg.replicas = 500;
  cfg.start_state = p.kappa;
  cfg.stop = BDPSimConfig::Stop::hit_down;
  const SimResult a = bdp_simulate(p, cfg);
  const SimResult b = bdp_simulate(p, cfg);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);

  cfg.seed = 8;
  const SimResult c = bdp_simulate(p, cfg);
  CHECK(a.estimate != c.estimate);

  BDPSimConfig bad = cfg;
  bad.replicas = 0;
  CHECK_THROWS_AS(bdp_simulate(p, bad), std::invalid_argument);
  bad = cfg;
  bad.stop = BDPSimConfig::Stop::fixed_horizon;
  bad.horizon = 0.0;
  CHECK_THROWS_AS(bdp_simulate(p, bad), std::invalid_argument);
  bad = cfg;
  bad.k1 = 2;
  bad.k2 = 1;
  CHECK_THROWS_AS(bdp_simulate(p, bad), std::invalid_argument);
}
