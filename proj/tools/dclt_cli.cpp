// Command-line front end: evaluate the family law, zero-bias transforms,
// factor checks, bound reports, parameter sweeps, and the Monte Carlo
// cross-check. Emits JSON or CSV; identical inputs give identical bytes.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "discrete_clt/bounds.hpp"
#include "discrete_clt/int_dist.hpp"
#include "discrete_clt/json_io.hpp"
#include "discrete_clt/psi_family.hpp"
#include "discrete_clt/stable_sum.hpp"
#include "discrete_clt/stein_bdp.hpp"
#include "discrete_clt/zero_bias.hpp"
#include "json.hpp"

namespace {

using namespace dclt;

struct Options {
  double mu = 0.0;
  double sigma2 = 0.0;
  std::int64_t kappa = 0;
  double eps = 1e-15;
  double K = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  std::int64_t replicas = 1000;
  std::string components;
  std::string output;
  std::string format = "json";
  std::vector<std::int64_t> set_members;
  bool complement = false;
  std::int64_t random_sets = 100;
  std::vector<std::int64_t> n_list;
  std::string p_spec;
  bool bernoulli = false;
  std::int64_t start = 0;
  std::string stop = "hit_down";
  double horizon = 0.0;
  std::int64_t k1 = kMinusInf;
  std::int64_t k2 = kPlusInf;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << text;
}

void require_format(const Options& o, const std::string& needed) {
  if (o.format != needed) {
    throw std::invalid_argument("this command emits " + needed + " only");
  }
}

PsiParams params_from(const Options& o, bool kappa_given) {
  const std::int64_t k = kappa_given ? o.kappa : default_kappa(o.mu);
  return make_psi_params(o.mu, o.sigma2, k, o.eps);
}

ComponentSet load_components(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read component file: " + path);
  nlohmann::json j;
  is >> j;
  return component_set_from_json(j);
}

std::string component_hash(const ComponentSet& cs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const IntDist& c : cs.components) arr.push_back(to_json(c));
  const std::string bytes = arr.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> parse_p_values(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a = 0.0, b = 0.0, step = 0.0;
    char colon1 = 0, colon2 = 0;
    std::istringstream is(spec);
    if (!(is >> a >> colon1 >> b >> colon2 >> step) || colon1 != ':' ||
        colon2 != ':' || !is.eof()) {
      throw std::invalid_argument("p grid must look like start:end:step");
    }
    if (!(step > 0.0)) throw std::invalid_argument("p grid step must be positive");
    for (int k = 0;; ++k) {
      const double p = a + static_cast<double>(k) * step;
      if (p > b + 1e-12) break;
      out.push_back(p);
    }
  } else {
    std::istringstream is(spec);
    std::string cell;
    while (std::getline(is, cell, ',')) out.push_back(std::stod(cell));
  }
  if (out.empty()) throw std::invalid_argument("empty p grid");
  for (double p : out) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("every p must lie in (0,1)");
    }
  }
  return out;
}

IntDist bernoulli_dist(double p) { return IntDist::from_pmf(0, {1.0 - p, p}); }

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

void run_psi(const Options& o, bool kappa_given) {
  require_format(o, "json");
  write_text(o.output, psi_report_json(params_from(o, kappa_given)).dump(2) + "\n");
}

void run_zero_bias(const Options& o, bool kappa_given) {
  require_format(o, "json");
  IntDist input = o.components.empty()
                      ? psi_pmf(params_from(o, kappa_given))
                      : convolve_all(load_components(o.components));
  nlohmann::json out{{"input", to_json(input)},
                     {"zero_bias", to_json(zero_bias(input))}};
  write_text(o.output, out.dump(2) + "\n");
}

void run_stein_check(const Options& o, bool kappa_given, bool set_given) {
  require_format(o, "json");
  const PsiParams p = params_from(o, kappa_given);
  if (set_given) {
    const TargetSet a = o.complement ? TargetSet::cofinite(o.set_members)
                                     : TargetSet::finite(o.set_members);
    write_text(o.output, stein_check_json(p, a).dump(2) + "\n");
    return;
  }
  if (o.random_sets < 1) {
    throw std::invalid_argument("--random-sets must be positive");
  }
  std::mt19937_64 gen(o.seed);
  SteinFactorCheck worst;
  bool all_hold = true;
  for (std::int64_t trial = 0; trial < o.random_sets; ++trial) {
    const SteinFactorCheck c = stein_factor_check(p, random_target(gen, p));
    all_hold = all_hold && c.holds;
    if (c.max_ratio > worst.max_ratio) {
      worst.max_ratio = c.max_ratio;
      worst.max_delta_f = c.max_delta_f;
      worst.bound_at_max = c.bound_at_max;
    }
    worst.max_ratio_weak = std::max(worst.max_ratio_weak, c.max_ratio_weak);
  }
  nlohmann::json out{{"params", to_json(p)},
                     {"A", nullptr},
                     {"random_sets", o.random_sets},
                     {"seed", o.seed},
                     {"max_delta_f", worst.max_delta_f},
                     {"bound", worst.bound_at_max},
                     {"ratio", worst.max_ratio},
                     {"ratio_weak", worst.max_ratio_weak},
                     {"holds", all_hold}};
  write_text(o.output, out.dump(2) + "\n");
}

void run_bound(const Options& o) {
  if (o.components.empty()) {
    throw std::invalid_argument("bound needs --components <file>");
  }
  const ComponentSet cs = load_components(o.components);
  const BoundReport rep = bound_report(cs, BoundOptions{o.K, o.eps});
  if (o.format == "json") {
    write_text(o.output, to_json(rep).dump(2) + "\n");
    return;
  }
  std::ostringstream os;
  CsvWriter writer(os, sweep_columns());
  writer.row(bound_report_row(std::to_string(cs.size()), component_hash(cs),
                              rep));
  write_text(o.output, os.str());
}

void run_sweep(const Options& o) {
  require_format(o, "csv");
  if (!o.bernoulli) {
    throw std::invalid_argument("sweep needs --bernoulli (the only family)");
  }
  if (o.n_list.empty()) throw std::invalid_argument("sweep needs --n");
  const std::vector<double> ps = parse_p_values(o.p_spec);
  std::ostringstream os;
  CsvWriter writer(os, sweep_columns());
  for (std::int64_t n : o.n_list) {
    if (n < 2) throw std::invalid_argument("sweep needs n >= 2");
    for (double p : ps) {
      const ComponentSet cs = make_component_set(std::vector<IntDist>(
          static_cast<std::size_t>(n), bernoulli_dist(p)));
      const BoundReport rep = bound_report(cs, BoundOptions{o.K, o.eps});
      writer.row(bound_report_row(std::to_string(n), csv_number(p), rep));
    }
  }
  write_text(o.output, os.str());
}

void run_simulate(const Options& o, bool kappa_given, bool start_given,
                  bool k1_given, bool k2_given) {
  require_format(o, "json");
  const PsiParams p = params_from(o, kappa_given);
  BDPSimConfig cfg;
  cfg.seed = o.seed;
  cfg.replicas = o.replicas;
  cfg.start_state = start_given ? o.start : p.kappa;
  cfg.k1 = k1_given ? o.k1 : kMinusInf;
  cfg.k2 = k2_given ? o.k2 : kPlusInf;
  if (o.stop == "hit_down") {
    cfg.stop = BDPSimConfig::Stop::hit_down;
  } else if (o.stop == "hit_up") {
    cfg.stop = BDPSimConfig::Stop::hit_up;
  } else if (o.stop == "fixed_horizon") {
    cfg.stop = BDPSimConfig::Stop::fixed_horizon;
    cfg.horizon = o.horizon;
  } else {
    throw std::invalid_argument("--stop must be hit_down, hit_up or fixed_horizon");
  }

  const SimResult res = bdp_simulate(p, cfg);

  double closed_form = 0.0;
  if (cfg.stop == BDPSimConfig::Stop::fixed_horizon) {
    const IntDist pi = psi_pmf(p);
    StableSum mass;
    for (std::int64_t l = std::max(cfg.k1, pi.min_support());
         l <= std::min(cfg.k2, pi.max_support()); ++l) {
      mass.add(pi.pmf(l));
    }
    closed_form = mass.value();
  } else {
    const Direction dir = cfg.stop == BDPSimConfig::Stop::hit_down
                              ? Direction::down
                              : Direction::up;
    closed_form = occupation_time(p, cfg.start_state, dir, cfg.k1, cfg.k2);
  }

  nlohmann::json config{
      {"seed", cfg.seed},
      {"replicas", cfg.replicas},
      {"start_state", cfg.start_state},
      {"stop", o.stop},
      {"horizon", cfg.stop == BDPSimConfig::Stop::fixed_horizon
                      ? nlohmann::json(cfg.horizon)
                      : nlohmann::json(nullptr)},
      {"k1", cfg.k1 == kMinusInf ? nlohmann::json(nullptr)
                                 : nlohmann::json(cfg.k1)},
      {"k2", cfg.k2 == kPlusInf ? nlohmann::json(nullptr)
                                : nlohmann::json(cfg.k2)}};
  nlohmann::json out{{"params", to_json(p)},
                     {"config", std::move(config)},
                     {"result", to_json(res)},
                     {"closed_form", closed_form}};
  write_text(o.output, out.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* cap = std::getenv("DISCRETE_CLT_SUPPORT_CAP")) {
    try {
      dclt::set_support_cap(std::stoll(cap));
    } catch (const std::exception&) {
      std::cerr << "error: invalid DISCRETE_CLT_SUPPORT_CAP value: " << cap
                << "\n";
      return 1;
    }
  }

  Options o;
  CLI::App app{"discrete central limit toolkit"};
  app.require_subcommand(1);

  auto add_params = [&](CLI::App* cmd, bool required) {
    auto* mu = cmd->add_option("--mu", o.mu, "Mean parameter");
    auto* s2 = cmd->add_option("--sigma2", o.sigma2, "Variance parameter");
    if (required) {
      mu->required();
      s2->required();
    }
    cmd->add_option("--eps", o.eps, "Relative truncation threshold");
    return cmd->add_option("--kappa", o.kappa,
                           "Junction (default: smallest integer >= mu)");
  };
  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--output", o.output, "Write here instead of stdout");
    cmd->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  auto* psi = app.add_subcommand("psi", "Family pmf, moments and tail bound");
  auto* psi_k = add_params(psi, true);
  add_io(psi);
  psi->callback([&] { run_psi(o, psi_k->count() > 0); });

  auto* zb = app.add_subcommand(
      "zero-bias", "Zero-bias transform of the family law or a component sum");
  auto* zb_k = add_params(zb, false);
  zb->add_option("--components", o.components,
                 "JSON component file (sum replaces the family law)");
  add_io(zb);
  zb->callback([&] {
    if (o.components.empty() && zb->count("--mu") + zb->count("--sigma2") < 2) {
      throw CLI::ValidationError(
          "zero-bias", "give --mu and --sigma2, or --components");
    }
    run_zero_bias(o, zb_k->count() > 0);
  });

  auto* sc = app.add_subcommand("stein-check",
                                "Factor bounds for one or many target sets");
  auto* sc_k = add_params(sc, true);
  auto* sc_set =
      sc->add_option("--set", o.set_members, "Target set members")
          ->delimiter(',');
  sc->add_flag("--complement", o.complement,
               "Check the complement of --set instead");
  sc->add_option("--random-sets", o.random_sets,
                 "Number of random target sets");
  sc->add_option("--seed", o.seed, "Random set seed");
  add_io(sc);
  sc->callback([&] { run_stein_check(o, sc_k->count() > 0, sc_set->count() > 0); });

  auto* bd = app.add_subcommand("bound", "Bound report for a component set");
  bd->add_option("--components", o.components, "JSON component file")
      ->required();
  bd->add_option("--K", o.K, "Truncation level for the sum bound");
  bd->add_option("--eps", o.eps, "Relative truncation threshold");
  add_io(bd);
  bd->callback([&] { run_bound(o); });

  auto* sw = app.add_subcommand("sweep", "Bound reports over a Bernoulli grid");
  sw->add_flag("--bernoulli", o.bernoulli, "iid Bernoulli components");
  sw->add_option("--n", o.n_list, "Component counts")->delimiter(',');
  sw->add_option("--p", o.p_spec, "Success probabilities: list or start:end:step");
  sw->add_option("--K", o.K, "Truncation level for the sum bound");
  sw->add_option("--eps", o.eps, "Relative truncation threshold");
  add_io(sw);
  sw->callback([&] {
    o.format = sw->count("--format") ? o.format : "csv";
    run_sweep(o);
  });

  auto* sim = app.add_subcommand("simulate",
                                 "Monte Carlo cross-check of occupation times");
  auto* sim_k = add_params(sim, true);
  sim->add_option("--seed", o.seed, "Stream seed");
  sim->add_option("--replicas", o.replicas, "Replica count");
  auto* sim_start = sim->add_option("--start", o.start, "Start state (default: kappa)");
  sim->add_option("--stop", o.stop, "hit_down, hit_up or fixed_horizon");
  sim->add_option("--horizon", o.horizon, "Horizon for fixed_horizon");
  auto* sim_k1 = sim->add_option("--k1", o.k1, "Occupation window lower end");
  auto* sim_k2 = sim->add_option("--k2", o.k2, "Occupation window upper end");
  add_io(sim);
  sim->callback([&] {
    run_simulate(o, sim_k->count() > 0, sim_start->count() > 0,
                 sim_k1->count() > 0, sim_k2->count() > 0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const dclt::SupportCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
