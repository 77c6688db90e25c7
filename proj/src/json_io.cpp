#include "discrete_clt/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace dclt {

nlohmann::json to_json(const IntDist& d) {
  return nlohmann::json{{"offset", d.min_support()},
                        {"weights", d.weights()},
                        {"tail_mass", d.tail_mass()}};
}

IntDist int_dist_from_json(const nlohmann::json& j) {
  const auto offset = j.at("offset").get<std::int64_t>();
  auto weights = j.at("weights").get<std::vector<double>>();
  const auto tail = j.at("tail_mass").get<double>();
  return IntDist::from_parts(offset, std::move(weights), tail);
}

nlohmann::json to_json(const PsiParams& p) {
  return nlohmann::json{{"mu", p.mu},          {"sigma2", p.sigma2},
                        {"kappa", p.kappa},    {"eps", p.eps},
                        {"ergodic", p.ergodic}, {"default_kappa", p.default_kappa}};
}

nlohmann::json to_json(const TargetSet& a) {
  return nlohmann::json{{"members", a.members}, {"complement", a.complement}};
}

nlohmann::json to_json(const SimResult& r) {
  return nlohmann::json{{"estimate", r.estimate},
                        {"std_error", r.std_error},
                        {"seed", r.seed},
                        {"replicas", r.replicas}};
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  if (v.has_value()) return *v;
  return nullptr;
}

}  // namespace

nlohmann::json to_json(const BoundReport& r) {
  return nlohmann::json{{"mu", r.mu},
                        {"sigma2", r.sigma2},
                        {"kappa", r.kappa},
                        {"actual_tv", r.actual_tv},
                        {"thm41_bound", optional_number(r.thm41_bound)},
                        {"thm42_bound", optional_number(r.thm42_bound)},
                        {"cor43_bound", optional_number(r.cor43_bound)},
                        {"dplus_exact", r.dplus_exact},
                        {"dplus_prop44", optional_number(r.dplus_prop44)},
                        {"baselines", r.baselines},
                        {"tail_slack", r.tail_slack},
                        {"periodic", r.periodic}};
}

nlohmann::json psi_report_json(const PsiParams& p) {
  const IntDist d = psi_pmf(p);
  const PsiMoments m = psi_moments(p);
  nlohmann::json metadata{{"mu", p.mu},
                          {"sigma2", p.sigma2},
                          {"kappa", p.kappa},
                          {"var_S", m.variance},
                          {"pi_kappa", m.pi_kappa},
                          {"tail_bound", d.tail_mass()},
                          {"eps", p.eps},
                          {"ergodic", p.ergodic},
                          {"default_kappa", p.default_kappa}};
  return nlohmann::json{{"metadata", std::move(metadata)},
                        {"pmf", to_json(d)}};
}

nlohmann::json stein_check_json(const PsiParams& p, const TargetSet& a) {
  const SteinFactorCheck c = stein_factor_check(p, a);
  return nlohmann::json{{"params", to_json(p)},
                        {"A", to_json(a)},
                        {"max_delta_f", c.max_delta_f},
                        {"bound", c.bound_at_max},
                        {"ratio", c.max_ratio},
                        {"ratio_weak", c.max_ratio_weak},
                        {"holds", c.holds}};
}

ComponentSet component_set_from_json(const nlohmann::json& j) {
  const nlohmann::json* list = &j;
  if (j.is_object()) list = &j.at("components");
  if (!list->is_array() || list->empty()) {
    throw std::invalid_argument(
        "component set: expected a nonempty array of distributions");
  }
  std::vector<IntDist> parts;
  parts.reserve(list->size());
  for (const nlohmann::json& item : *list) {
    parts.push_back(int_dist_from_json(item));
  }
  return make_component_set(std::move(parts));
}

std::string csv_number(double x) {
  if (!std::isfinite(x)) {
    throw std::logic_error("csv_number: refusing to write a non-finite value");
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header)
    : os_(os), width_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw std::logic_error("csv row: wrong number of cells");
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].find_first_of(",\n\"") != std::string::npos) {
      throw std::logic_error("csv row: cell needs quoting, refusing");
    }
    if (k) os_ << ',';
    os_ << cells[k];
  }
  os_ << '\n';
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "n",          "p",           "mu",
      "sigma2",     "kappa",       "actual_tv",
      "cor43",      "thm41",       "thm42",
      "dplus_max",  "prop44",      "tv_discrete_normal",
      "tv_translated_poisson",     "tail_slack"};
  return cols;
}

std::vector<std::string> bound_report_row(const std::string& n_cell,
                                          const std::string& p_cell,
                                          const BoundReport& rep) {
  auto opt_cell = [](const std::optional<double>& v) {
    return v.has_value() ? csv_number(*v) : std::string{};
  };
  const double dplus_max =
      rep.dplus_exact.empty()
          ? 0.0
          : *std::max_element(rep.dplus_exact.begin(), rep.dplus_exact.end());
  return {n_cell,
          p_cell,
          csv_number(rep.mu),
          csv_number(rep.sigma2),
          std::to_string(rep.kappa),
          csv_number(rep.actual_tv),
          opt_cell(rep.cor43_bound),
          opt_cell(rep.thm41_bound),
          opt_cell(rep.thm42_bound),
          csv_number(dplus_max),
          opt_cell(rep.dplus_prop44),
          csv_number(rep.baselines.at("discrete_normal")),
          csv_number(rep.baselines.at("translated_poisson")),
          csv_number(rep.tail_slack)};
}

}  // namespace dclt
