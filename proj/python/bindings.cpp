#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sonorad/analytic.hpp"
#include "sonorad/constants.hpp"
#include "sonorad/engine.hpp"
#include "sonorad/medium.hpp"
#include "sonorad/modes.hpp"
#include "sonorad/profile.hpp"
#include "sonorad/selftest.hpp"
#include "sonorad/specfun.hpp"

namespace py = pybind11;
using namespace sonorad;

PYBIND11_MODULE(_core, m) {
  m.doc() = "photon-pair emission from a collapsing cavity in a dielectric";

  m.attr("hbar") = constants::hbar;
  m.attr("c") = constants::c;
  m.attr("kB") = constants::kB;
  m.attr("sw_coefficient") = modes::kSwCoefficient;

  py::class_<MediumSpec>(m, "MediumSpec")
      .def_static("constant", &MediumSpec::constant, py::arg("n"))
      .def_static("tabulated", &MediumSpec::tabulated, py::arg("rows"));
  m.def("refractive_index", &refractive_index, py::arg("medium"),
        py::arg("omega"));
  m.def("reflection_probability", &reflection_probability, py::arg("n"));

  py::class_<RunParams>(m, "RunParams")
      .def(py::init<>())
      .def_readwrite("r0", &RunParams::r0)
      .def_readwrite("rmin", &RunParams::rmin)
      .def_readwrite("gamma", &RunParams::gamma)
      .def_readwrite("period", &RunParams::period)
      .def_readwrite("center", &RunParams::center)
      .def("validate", &RunParams::validate);

  m.def("sph_bessel_j", &specfun::sph_bessel_j, py::arg("l"), py::arg("x"));
  m.def("sph_bessel_y", &specfun::sph_bessel_y, py::arg("l"), py::arg("x"));
  m.def("riccati_derivs", &specfun::riccati_derivs, py::arg("l"), py::arg("x"));
  m.def("debye_j", &specfun::debye_j, py::arg("l"), py::arg("x"));
  m.def("debye_riccati_jp", &specfun::debye_riccati_jp, py::arg("l"),
        py::arg("x"));

  py::enum_<modes::Pol>(m, "Pol").value("TE", modes::Pol::kTE).value(
      "TM", modes::Pol::kTM);

  py::class_<modes::ContinuityFactors>(m, "ContinuityFactors")
      .def_readonly("n_te", &modes::ContinuityFactors::n_te)
      .def_readonly("d_te", &modes::ContinuityFactors::d_te)
      .def_readonly("n_tm", &modes::ContinuityFactors::n_tm)
      .def_readonly("d_tm", &modes::ContinuityFactors::d_tm);
  m.def("continuity_factors", &modes::continuity_factors, py::arg("l"),
        py::arg("n"), py::arg("x"));

  py::class_<modes::ModeNormalization>(m, "ModeNormalization")
      .def_readonly("s_inv", &modes::ModeNormalization::s_inv)
      .def_readonly("delta", &modes::ModeNormalization::delta)
      .def_readonly("l", &modes::ModeNormalization::l)
      .def_readonly("n", &modes::ModeNormalization::n)
      .def_readonly("x", &modes::ModeNormalization::x);
  m.def("normalization", &modes::normalization, py::arg("l"), py::arg("pol"),
        py::arg("n"), py::arg("x"));

  m.def("force_factor", &modes::force_factor, py::arg("l"), py::arg("pol"),
        py::arg("n"), py::arg("k"), py::arg("kp"), py::arg("r"));

  py::class_<modes::TruncationPolicy>(m, "TruncationPolicy")
      .def(py::init<>())
      .def_readwrite("l_max_cap", &modes::TruncationPolicy::l_max_cap)
      .def_readwrite("rel_tol", &modes::TruncationPolicy::rel_tol)
      .def_readwrite("growth", &modes::TruncationPolicy::growth)
      .def_readwrite("margin", &modes::TruncationPolicy::margin);
  m.def("aux_im", &modes::aux_im, py::arg("k"), py::arg("kp"), py::arg("r_a"),
        py::arg("r_b"), py::arg("n"),
        py::arg("policy") = modes::TruncationPolicy{});
  m.def("aux_im_sw", &modes::aux_im_sw, py::arg("k"), py::arg("kp"),
        py::arg("r_a"), py::arg("r_b"));

  py::class_<profile::BubbleProfile>(m, "BubbleProfile")
      .def_static("lorentzian", &profile::BubbleProfile::lorentzian,
                  py::arg("params"))
      .def_static("tabulated", &profile::BubbleProfile::tabulated,
                  py::arg("samples"))
      .def("radius", &profile::BubbleProfile::radius, py::arg("t"))
      .def("beta", &profile::BubbleProfile::beta, py::arg("t"))
      .def("dr2dt", &profile::BubbleProfile::dr2dt, py::arg("t"))
      .def("dr2_deriv", &profile::BubbleProfile::dr2_deriv, py::arg("order"),
           py::arg("t"))
      .def("window", &profile::BubbleProfile::window);

  py::class_<profile::ProfileDiagnostics>(m, "ProfileDiagnostics")
      .def_readonly("beta_max", &profile::ProfileDiagnostics::beta_max)
      .def_readonly("t_at_beta_max", &profile::ProfileDiagnostics::t_at_beta_max)
      .def_readonly("min_radius", &profile::ProfileDiagnostics::min_radius)
      .def_readonly("warning", &profile::ProfileDiagnostics::warning);
  m.def("diagnostics", &profile::diagnostics, py::arg("profile"),
        py::arg("warn_threshold") = 0.1);

  m.def("model_energy", &analytic::model_energy, py::arg("params"), py::arg("n"));
  m.def("model_spectrum_at", &analytic::model_spectrum_at, py::arg("params"),
        py::arg("n"), py::arg("omega"));
  m.def("effective_temperature", &analytic::effective_temperature,
        py::arg("gamma_s"));
  m.def("energy_sw_quadrature", &analytic::energy_sw_quadrature,
        py::arg("profile"), py::arg("n"));
  m.def("energy_derivative_form", &analytic::energy_derivative_form,
        py::arg("profile"), py::arg("n"));

  py::class_<engine::EngineConfig>(m, "EngineConfig")
      .def(py::init<>())
      .def_readwrite("tau_points", &engine::EngineConfig::tau_points)
      .def_readwrite("omega_prime_max", &engine::EngineConfig::omega_prime_max)
      .def_readwrite("omega_prime_points",
                     &engine::EngineConfig::omega_prime_points)
      .def_readwrite("l_policy", &engine::EngineConfig::l_policy)
      .def_readwrite("rel_tol", &engine::EngineConfig::rel_tol)
      .def_readwrite("sw_fast_path", &engine::EngineConfig::sw_fast_path)
      .def_readwrite("sw_coefficient", &engine::EngineConfig::sw_coefficient)
      .def_readwrite("threads", &engine::EngineConfig::threads);

  py::class_<engine::SpectrumRow>(m, "SpectrumRow")
      .def_readonly("omega", &engine::SpectrumRow::omega)
      .def_readonly("lambda_m", &engine::SpectrumRow::lambda)
      .def_readonly("p", &engine::SpectrumRow::p)
      .def_readonly("cumulative_energy", &engine::SpectrumRow::cumulative_energy)
      .def_readonly("flag", &engine::SpectrumRow::flag);
  py::class_<engine::SpectrumTable>(m, "SpectrumTable")
      .def_readonly("rows", &engine::SpectrumTable::rows)
      .def_readonly("total_energy", &engine::SpectrumTable::total_energy)
      .def_readonly("config_echo", &engine::SpectrumTable::config_echo)
      .def_readonly("profile_echo", &engine::SpectrumTable::profile_echo);

  m.def("pair_transform", &engine::pair_transform, py::arg("l"), py::arg("pol"),
        py::arg("omega"), py::arg("omega_prime"), py::arg("profile"),
        py::arg("medium"), py::arg("config"));
  m.def("pair_rate", &engine::pair_rate, py::arg("omega"),
        py::arg("omega_prime"), py::arg("profile"), py::arg("medium"),
        py::arg("config"));
  m.def("spectral_density", &engine::spectral_density, py::arg("omega"),
        py::arg("profile"), py::arg("medium"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("total_energy", &engine::total_energy, py::arg("profile"),
        py::arg("medium"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "spectrum_sweep",
      [](const std::vector<double>& grid, const profile::BubbleProfile& p,
         const MediumSpec& medium, const engine::EngineConfig& cfg) {
        return engine::spectrum_sweep(grid, p, medium, cfg);
      },
      py::arg("omega_grid"), py::arg("profile"), py::arg("medium"),
      py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("default_omega_prime_max", &engine::default_omega_prime_max,
        py::arg("profile"));

  py::class_<selftest::SuiteResult>(m, "SuiteResult")
      .def_readonly("name", &selftest::SuiteResult::name)
      .def_readonly("pass_", &selftest::SuiteResult::pass)
      .def_readonly("details", &selftest::SuiteResult::details);
  m.def("run_selftest", &selftest::run_quick,
        py::call_guard<py::gil_scoped_release>());
}
