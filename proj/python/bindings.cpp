#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>

#include "discrete_clt/bounds.hpp"
#include "discrete_clt/int_dist.hpp"
#include "discrete_clt/psi_family.hpp"
#include "discrete_clt/stein_bdp.hpp"
#include "discrete_clt/zero_bias.hpp"

namespace py = pybind11;
using namespace dclt;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete central limit machinery: zero biasing, birth-death "
            "equilibria, and total-variation bounds for integer sums.";

  py::register_exception<SupportCapError>(m, "SupportCapError",
                                          PyExc_RuntimeError);

  py::class_<IntDist>(m, "IntDist")
      .def_static("from_pmf", &IntDist::from_pmf, py::arg("offset"),
                  py::arg("weights"))
      .def_static("from_parts", &IntDist::from_parts, py::arg("offset"),
                  py::arg("weights"), py::arg("tail_mass"))
      .def_static("point_mass", &IntDist::point_mass, py::arg("c"))
      .def_property_readonly("offset", &IntDist::offset)
      .def_property_readonly("weights", &IntDist::weights)
      .def_property_readonly("tail_mass", &IntDist::tail_mass)
      .def_property_readonly("min_support", &IntDist::min_support)
      .def_property_readonly("max_support", &IntDist::max_support)
      .def("pmf", &IntDist::pmf, py::arg("j"))
      .def("__eq__", [](const IntDist& a, const IntDist& b) { return a == b; })
      .def("__len__", [](const IntDist& d) {
        return static_cast<std::size_t>(d.support_size());
      });

  m.def("mean", &mean, py::arg("d"));
  m.def("variance", &variance, py::arg("d"));
  m.def("convolve", &convolve, py::arg("a"), py::arg("b"));
  m.def("shift", &shift, py::arg("d"), py::arg("c"));
  m.def("tv_distance", &tv_distance, py::arg("a"), py::arg("b"));
  m.def("set_support_cap", &set_support_cap, py::arg("points"));
  m.def("support_cap", &support_cap);

  // --- approximating family ---

  py::class_<PsiParams>(m, "PsiParams")
      .def_readonly("mu", &PsiParams::mu)
      .def_readonly("sigma2", &PsiParams::sigma2)
      .def_readonly("kappa", &PsiParams::kappa)
      .def_readonly("eps", &PsiParams::eps)
      .def_readonly("ergodic", &PsiParams::ergodic)
      .def_readonly("default_kappa", &PsiParams::default_kappa);

  m.def("default_kappa", &default_kappa, py::arg("mu"));
  m.def(
      "make_psi_params",
      [](double mu, double sigma2, std::optional<std::int64_t> kappa,
         double eps) {
        return kappa ? make_psi_params(mu, sigma2, *kappa, eps)
                     : make_psi_params(mu, sigma2, default_kappa(mu), eps);
      },
      py::arg("mu"), py::arg("sigma2"), py::arg("kappa") = py::none(),
      py::arg("eps") = 1e-15);
  m.def("psi_pmf", &psi_pmf, py::arg("params"));

  py::class_<PsiMoments>(m, "PsiMoments")
      .def_readonly("mean", &PsiMoments::mean)
      .def_readonly("variance", &PsiMoments::variance)
      .def_readonly("pi_kappa", &PsiMoments::pi_kappa);
  m.def("psi_moments", &psi_moments, py::arg("params"));
  m.def("psi_zero_bias", &psi_zero_bias, py::arg("params"));
  m.def(
      "translated_fixed_point_pmf",
      [](double mu, double sigma2, double eps) {
        return truncated_fixed_point_pmf(make_truncated_fixed_point(mu, sigma2),
                                         eps);
      },
      py::arg("mu"), py::arg("sigma2"), py::arg("eps") = 1e-15);
  m.def("discrete_normal_pmf", &discrete_normal_pmf, py::arg("mu"),
        py::arg("sigma2"), py::arg("eps") = 1e-15);

  // --- transforms and component sums ---

  m.def("zero_bias", &zero_bias, py::arg("d"));
  m.def("size_bias", &size_bias, py::arg("d"));

  py::class_<ComponentSet>(m, "ComponentSet")
      .def_readonly("components", &ComponentSet::components)
      .def_readonly("means", &ComponentSet::means)
      .def_readonly("variances", &ComponentSet::variances)
      .def_readonly("total_mean", &ComponentSet::total_mean)
      .def_readonly("total_variance", &ComponentSet::total_variance)
      .def("__len__", &ComponentSet::size);
  m.def("make_component_set", &make_component_set, py::arg("components"));
  m.def("convolve_all", &convolve_all, py::arg("cs"));
  m.def("leave_one_out", &leave_one_out, py::arg("cs"), py::arg("i"));
  m.def("sum_zero_bias", &sum_zero_bias, py::arg("cs"));

  // --- birth-death machinery ---

  py::class_<TargetSet>(m, "TargetSet")
      .def_static("finite", &TargetSet::finite, py::arg("members"))
      .def_static("cofinite", &TargetSet::cofinite, py::arg("members"))
      .def_readonly("members", &TargetSet::members)
      .def_readonly("complement", &TargetSet::complement)
      .def("contains", &TargetSet::contains, py::arg("i"));

  py::class_<SteinTable>(m, "SteinTable")
      .def_readonly("window_lo", &SteinTable::window_lo)
      .def_readonly("window_hi", &SteinTable::window_hi)
      .def_readonly("f", &SteinTable::f)
      .def_readonly("delta_f", &SteinTable::delta_f)
      .def_readonly("g", &SteinTable::g)
      .def_readonly("prob_target", &SteinTable::prob_target)
      .def("f_at", &SteinTable::f_at, py::arg("i"))
      .def("delta_at", &SteinTable::delta_at, py::arg("i"))
      .def("g_at", &SteinTable::g_at, py::arg("i"))
      .def("h_at", &SteinTable::h_at, py::arg("i"));
  m.def("stein_solution", &stein_solution, py::arg("params"), py::arg("target"));
  m.def("max_stein_residual", &max_stein_residual, py::arg("table"));

  py::class_<SteinFactorCheck>(m, "SteinFactorCheck")
      .def_readonly("max_ratio", &SteinFactorCheck::max_ratio)
      .def_readonly("max_ratio_weak", &SteinFactorCheck::max_ratio_weak)
      .def_readonly("max_delta_f", &SteinFactorCheck::max_delta_f)
      .def_readonly("bound_at_max", &SteinFactorCheck::bound_at_max)
      .def_readonly("holds", &SteinFactorCheck::holds);
  m.def("stein_factor_check", &stein_factor_check, py::arg("params"),
        py::arg("target"));

  py::enum_<Direction>(m, "Direction")
      .value("up", Direction::up)
      .value("down", Direction::down);
  m.attr("MINUS_INF") = kMinusInf;
  m.attr("PLUS_INF") = kPlusInf;
  m.def("occupation_time", &occupation_time, py::arg("params"), py::arg("i"),
        py::arg("direction"), py::arg("k1") = kMinusInf,
        py::arg("k2") = kPlusInf);

  py::class_<BDPSimConfig> sim_config(m, "BDPSimConfig");
  py::enum_<BDPSimConfig::Stop>(sim_config, "Stop")
      .value("hit_down", BDPSimConfig::Stop::hit_down)
      .value("hit_up", BDPSimConfig::Stop::hit_up)
      .value("fixed_horizon", BDPSimConfig::Stop::fixed_horizon);
  sim_config.def(py::init<>())
      .def_readwrite("seed", &BDPSimConfig::seed)
      .def_readwrite("replicas", &BDPSimConfig::replicas)
      .def_readwrite("start_state", &BDPSimConfig::start_state)
      .def_readwrite("stop", &BDPSimConfig::stop)
      .def_readwrite("horizon", &BDPSimConfig::horizon)
      .def_readwrite("k1", &BDPSimConfig::k1)
      .def_readwrite("k2", &BDPSimConfig::k2)
      .def_readwrite("state_cap", &BDPSimConfig::state_cap);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("estimate", &SimResult::estimate)
      .def_readonly("std_error", &SimResult::std_error)
      .def_readonly("seed", &SimResult::seed)
      .def_readonly("replicas", &SimResult::replicas);
  m.def("bdp_simulate", &bdp_simulate, py::arg("params"), py::arg("config"));

  // --- bounds ---

  m.def("thm41_bound", py::overload_cast<const IntDist&>(&thm41_bound),
        py::arg("y"));
  m.def("thm41_bound",
        py::overload_cast<const IntDist&, std::int64_t>(&thm41_bound),
        py::arg("y"), py::arg("kappa"));
  m.def("dplus_exact", &dplus_exact, py::arg("cs"), py::arg("i"));
  m.def("thm42_bound", py::overload_cast<const ComponentSet&>(&thm42_bound),
        py::arg("cs"));
  m.def("thm42_bound",
        py::overload_cast<const ComponentSet&, double>(&thm42_bound),
        py::arg("cs"), py::arg("K"));

  py::class_<Prop44Estimate>(m, "Prop44Estimate")
      .def_readonly("U", &Prop44Estimate::U)
      .def_readonly("u", &Prop44Estimate::u)
      .def_readonly("bound_w", &Prop44Estimate::bound_w)
      .def_readonly("bound_wi", &Prop44Estimate::bound_wi);
  m.def("dplus_prop44", &dplus_prop44, py::arg("cs"));

  py::class_<Cor43Result>(m, "Cor43Result")
      .def_readonly("bound", &Cor43Result::bound)
      .def_readonly("vartheta2", &Cor43Result::vartheta2);
  m.def("cor43_bound", &cor43_bound, py::arg("ps"));

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("mu", &BoundReport::mu)
      .def_readonly("sigma2", &BoundReport::sigma2)
      .def_readonly("kappa", &BoundReport::kappa)
      .def_readonly("actual_tv", &BoundReport::actual_tv)
      .def_readonly("thm41_bound", &BoundReport::thm41_bound)
      .def_readonly("thm42_bound", &BoundReport::thm42_bound)
      .def_readonly("cor43_bound", &BoundReport::cor43_bound)
      .def_readonly("dplus_exact", &BoundReport::dplus_exact)
      .def_readonly("dplus_prop44", &BoundReport::dplus_prop44)
      .def_readonly("baselines", &BoundReport::baselines)
      .def_readonly("tail_slack", &BoundReport::tail_slack)
      .def_readonly("periodic", &BoundReport::periodic);

  py::class_<BoundOptions>(m, "BoundOptions")
      .def(py::init<>())
      .def_readwrite("K", &BoundOptions::K)
      .def_readwrite("eps", &BoundOptions::eps);
  m.def(
      "bound_report",
      [](const ComponentSet& cs, double K, double eps) {
        return bound_report(cs, BoundOptions{K, eps});
      },
      py::arg("cs"), py::arg("K") = std::numeric_limits<double>::infinity(),
      py::arg("eps") = 1e-15);
}
