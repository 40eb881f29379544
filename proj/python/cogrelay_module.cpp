#include "cogrelay/closed_form.hpp"
#include "cogrelay/mc_sim.hpp"
#include "cogrelay/quad_oracle.hpp"
#include "cogrelay/scenario.hpp"
#include "cogrelay/specfun.hpp"
#include "cogrelay/sweep.hpp"
#include "cogrelay/validate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace cogrelay;

PYBIND11_MODULE(_core, m) {
    m.doc() = "outage analysis for an underlay cognitive relay network";

    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<OutsideValidityError>(m, "OutsideValidityError", PyExc_ValueError);

    py::class_<ScenarioParams>(m, "ScenarioParams")
        .def(py::init<>())
        .def_readwrite("omega_pt_pd", &ScenarioParams::omega_pt_pd)
        .def_readwrite("omega_st_pd", &ScenarioParams::omega_st_pd)
        .def_readwrite("omega_sr_pd", &ScenarioParams::omega_sr_pd)
        .def_readwrite("omega_st_sd", &ScenarioParams::omega_st_sd)
        .def_readwrite("omega_pt_sd", &ScenarioParams::omega_pt_sd)
        .def_readwrite("omega_st_sr", &ScenarioParams::omega_st_sr)
        .def_readwrite("omega_pt_sr", &ScenarioParams::omega_pt_sr)
        .def_readwrite("omega_sr_sd", &ScenarioParams::omega_sr_sd)
        .def_readwrite("p_pt", &ScenarioParams::p_pt)
        .def_readwrite("p_pk", &ScenarioParams::p_pk)
        .def_readwrite("n0", &ScenarioParams::n0)
        .def_readwrite("r_p", &ScenarioParams::r_p)
        .def_readwrite("r_s", &ScenarioParams::r_s)
        .def_readwrite("lambda_p", &ScenarioParams::lambda_p)
        .def_readwrite("n_relays", &ScenarioParams::n_relays);

    py::class_<Thresholds>(m, "Thresholds")
        .def_readonly("theta_p", &Thresholds::theta_p)
        .def_readonly("theta_s", &Thresholds::theta_s);

    py::enum_<Binding>(m, "Binding")
        .value("peak", Binding::peak)
        .value("primary_outage", Binding::primary_outage)
        .value("zero", Binding::zero);

    py::class_<PowerBudget>(m, "PowerBudget")
        .def(py::init<>())
        .def_readwrite("p_st", &PowerBudget::p_st)
        .def_readwrite("p_sr", &PowerBudget::p_sr)
        .def_readwrite("st_binding", &PowerBudget::st_binding)
        .def_readwrite("sr_binding", &PowerBudget::sr_binding);

    py::enum_<Validity>(m, "Validity")
        .value("valid", Validity::valid)
        .value("outside_validity_region", Validity::outside_validity_region)
        .value("degenerate_fallback", Validity::degenerate_fallback);

    py::class_<PerRelayTerms>(m, "PerRelayTerms")
        .def_readonly("n", &PerRelayTerms::n)
        .def_readonly("j21", &PerRelayTerms::j21)
        .def_readonly("j22", &PerRelayTerms::j22)
        .def_readonly("j3", &PerRelayTerms::j3);

    py::class_<ClosedFormResult>(m, "ClosedFormResult")
        .def_readonly("i1", &ClosedFormResult::i1)
        .def_readonly("i2", &ClosedFormResult::i2)
        .def_readonly("i3", &ClosedFormResult::i3)
        .def_readonly("outage_mrc", &ClosedFormResult::outage_mrc)
        .def_readonly("outage_relay_only", &ClosedFormResult::outage_relay_only)
        .def_readonly("per_n_terms", &ClosedFormResult::per_n_terms)
        .def_readonly("validity", &ClosedFormResult::validity);

    py::enum_<OutageMode>(m, "OutageMode")
        .value("mrc_with_direct", OutageMode::mrc_with_direct)
        .value("relay_only", OutageMode::relay_only);

    py::enum_<SinrModel>(m, "SinrModel")
        .value("exact_harmonic", SinrModel::exact_harmonic)
        .value("max_min_bound", SinrModel::max_min_bound);

    py::enum_<CombineMode>(m, "CombineMode")
        .value("mrc_with_direct", CombineMode::mrc_with_direct)
        .value("relay_only", CombineMode::relay_only)
        .value("direct_only", CombineMode::direct_only);

    py::enum_<SelectionRule>(m, "SelectionRule")
        .value("by_exact", SelectionRule::by_exact)
        .value("by_bound", SelectionRule::by_bound);

    py::class_<McConfig>(m, "McConfig")
        .def(py::init<>())
        .def_readwrite("samples", &McConfig::samples)
        .def_readwrite("seed", &McConfig::seed)
        .def_readwrite("sinr_model", &McConfig::sinr_model)
        .def_readwrite("combine", &McConfig::combine)
        .def_readwrite("selection_rule", &McConfig::selection_rule);

    py::class_<OutageEstimate>(m, "OutageEstimate")
        .def_readonly("p_hat", &OutageEstimate::p_hat)
        .def_readonly("ci_low", &OutageEstimate::ci_low)
        .def_readonly("ci_high", &OutageEstimate::ci_high)
        .def_readonly("samples", &OutageEstimate::samples)
        .def_readonly("seed", &OutageEstimate::seed);

    m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); },
          py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("validate_params", &validate_params, py::arg("params"));
    m.def("thresholds", &thresholds, py::arg("params"));
    m.def("power_budget", &power_budget, py::arg("params"));
    m.def("primary_outage_given_power", &primary_outage_given_power, py::arg("params"),
          py::arg("p_secondary"), py::arg("omega_interferer_pd"));
    m.def("db_to_linear", &db_to_linear, py::arg("db"));
    m.def("linear_to_db", &linear_to_db, py::arg("linear"));

    m.def("secondary_outage_mrc",
          py::overload_cast<const ScenarioParams&>(&secondary_outage_mrc), py::arg("params"));
    m.def("secondary_outage_mrc",
          py::overload_cast<const ScenarioParams&, const PowerBudget&>(&secondary_outage_mrc),
          py::arg("params"), py::arg("budget"));

    m.def(
        "outage_by_quadrature",
        [](const ScenarioParams& p, OutageMode mode) { return outage_by_quadrature(p, mode); },
        py::arg("params"), py::arg("mode"));
    m.def(
        "outage_by_quadrature",
        [](const ScenarioParams& p, const PowerBudget& b, OutageMode mode) {
            return outage_by_quadrature(p, b, mode);
        },
        py::arg("params"), py::arg("budget"), py::arg("mode"));

    m.def(
        "estimate_secondary_outage",
        [](const ScenarioParams& p, const McConfig& cfg, int workers) {
            return estimate_secondary_outage(p, cfg, workers);
        },
        py::arg("params"), py::arg("config"), py::arg("workers") = 1);
    m.def(
        "estimate_primary_outage",
        [](const ScenarioParams& p, double p_secondary, double omega, const McConfig& cfg,
           int workers) {
            return estimate_primary_outage(p, p_secondary, omega, cfg, workers);
        },
        py::arg("params"), py::arg("p_secondary"), py::arg("omega_interferer_pd"),
        py::arg("config"), py::arg("workers") = 1);

    py::enum_<Axis>(m, "Axis")
        .value("p_pt_db", Axis::p_pt_db)
        .value("lambda_p", Axis::lambda_p)
        .value("p_pk_db", Axis::p_pk_db)
        .value("n_relays", Axis::n_relays)
        .value("r_s", Axis::r_s);

    py::enum_<Engine>(m, "Engine")
        .value("closed_form", Engine::closed_form)
        .value("monte_carlo", Engine::monte_carlo)
        .value("quadrature", Engine::quadrature);

    py::enum_<Curve>(m, "Curve")
        .value("mrc_with_direct", Curve::mrc_with_direct)
        .value("relay_only", Curve::relay_only);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("axis", &SweepSpec::axis)
        .def_readwrite("grid", &SweepSpec::grid)
        .def_readwrite("base", &SweepSpec::base)
        .def_readwrite("engines", &SweepSpec::engines)
        .def_readwrite("curves", &SweepSpec::curves)
        .def_readwrite("mc_samples", &SweepSpec::mc_samples)
        .def_readwrite("mc_seed", &SweepSpec::mc_seed);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("axis", &SweepRow::axis)
        .def_readonly("axis_value", &SweepRow::axis_value)
        .def_readonly("curve", &SweepRow::curve)
        .def_readonly("engine", &SweepRow::engine)
        .def_readonly("outage", &SweepRow::outage)
        .def_readonly("ci_low", &SweepRow::ci_low)
        .def_readonly("ci_high", &SweepRow::ci_high)
        .def_readonly("p_st", &SweepRow::p_st)
        .def_readonly("p_sr", &SweepRow::p_sr)
        .def_readonly("st_binding", &SweepRow::st_binding)
        .def_readonly("sr_binding", &SweepRow::sr_binding)
        .def_readonly("validity", &SweepRow::validity);

    m.def("parse_sweep", [](const std::string& text) { return parse_sweep(text); },
          py::arg("text"));
    m.def("load_sweep", &load_sweep, py::arg("path"));
    m.def("run_sweep", &run_sweep, py::arg("spec"), py::arg("workers") = 1);
    m.def("to_csv", &to_csv, py::arg("rows"));

    auto sf = m.def_submodule("specfun", "special function kernels");
    sf.def("exp_integral_e1", &specfun::exp_integral_e1, py::arg("x"));
    sf.def("exp_integral_en", &specfun::exp_integral_en, py::arg("n"), py::arg("x"));
    sf.def("upper_gamma_nonpos", &specfun::upper_gamma_nonpos, py::arg("a"), py::arg("x"));
    sf.def("e1_difference", &specfun::e1_difference, py::arg("lo"), py::arg("hi"));
}
