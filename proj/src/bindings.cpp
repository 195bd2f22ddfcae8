#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinbath/experiments.hpp"

namespace py = pybind11;
using namespace spinbath;

namespace {

std::vector<double> bloch_column(const Trajectory& t, double BlochVector::*m) {
  std::vector<double> out;
  out.reserve(t.bloch.size());
  for (const auto& b : t.bloch) out.push_back(b.*m);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-system relaxation of a central spin in a finite bath";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<UsageError>(m, "UsageError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<CapacityError>(m, "CapacityError", base);
  py::register_exception<PropagationError>(m, "PropagationError", base);
  py::register_exception<IoError>(m, "IoError", base);

  py::enum_<CouplingKind>(m, "CouplingKind")
      .value("Gue", CouplingKind::Gue)
      .value("Star", CouplingKind::Star)
      .value("RingStar", CouplingKind::RingStar);
  py::enum_<RingKind>(m, "RingKind")
      .value("IsingXX", RingKind::IsingXX)
      .value("XY", RingKind::XY)
      .value("Heisenberg", RingKind::Heisenberg)
      .value("IsingZZ", RingKind::IsingZZ);
  py::enum_<InitialStateKind>(m, "InitialStateKind")
      .value("Up", InitialStateKind::Up)
      .value("Superposition", InitialStateKind::Superposition);
  py::enum_<Method>(m, "Method")
      .value("Auto", Method::Auto)
      .value("Projected", Method::Projected)
      .value("Exact", Method::Exact)
      .value("Krylov", Method::Krylov);
  py::enum_<DualityMode>(m, "DualityMode")
      .value("Exact", DualityMode::Exact)
      .value("Physical", DualityMode::Physical);

  m.def("binomial", &binomial, py::arg("n"), py::arg("k"));
  m.def("enumerate_band", &enumerate_band, py::arg("n_bits"), py::arg("k"));
  m.def(
      "subspace_dim",
      [](int n_env, int k) { return AccessibleSubspace(n_env, k).dim(); },
      py::arg("n_env"), py::arg("k"));
  m.def("expected_inversion", &expected_inversion, py::arg("n_env"),
        py::arg("k"));
  m.def("spectral_beta", &spectral_beta, py::arg("n_env"), py::arg("k"),
        py::arg("delta_c") = 1.0);
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));

  py::class_<SpectralPoint>(m, "SpectralPoint")
      .def_readonly("k", &SpectralPoint::k)
      .def_readonly("beta", &SpectralPoint::beta)
      .def_readonly("inversion", &SpectralPoint::inversion);
  m.def("beta_table", &beta_table, py::arg("n_env"), py::arg("delta_c") = 1.0);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("n_env", &ModelConfig::n_env)
      .def_readwrite("k", &ModelConfig::k)
      .def_readwrite("delta_c", &ModelConfig::delta_c)
      .def_readwrite("delta_s", &ModelConfig::delta_s)
      .def_readwrite("alpha", &ModelConfig::alpha)
      .def_readwrite("gamma", &ModelConfig::gamma)
      .def_readwrite("coupling_kind", &ModelConfig::coupling_kind)
      .def_readwrite("ring_kind", &ModelConfig::ring_kind)
      .def_readwrite("central_init", &ModelConfig::central_init)
      .def_readwrite("initial_m", &ModelConfig::initial_m)
      .def_readwrite("seed", &ModelConfig::seed)
      .def("validate", &ModelConfig::validate);
  m.def("parse_config_text", &parse_config_text, py::arg("text"));
  m.def("load_config_file", &load_config_file, py::arg("path"));
  m.def("config_to_text", &config_to_text, py::arg("config"));

  py::class_<RunParams>(m, "RunParams")
      .def(py::init<>())
      .def_readwrite("t_max", &RunParams::t_max)
      .def_readwrite("samples", &RunParams::samples)
      .def_readwrite("discard", &RunParams::discard)
      .def_readwrite("method", &RunParams::method)
      .def_readwrite("dense_cap", &RunParams::dense_cap);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly(
          "t", [](const Trajectory& t) { return t.times; })
      .def_property_readonly(
          "sx", [](const Trajectory& t) { return bloch_column(t, &BlochVector::x); })
      .def_property_readonly(
          "sy", [](const Trajectory& t) { return bloch_column(t, &BlochVector::y); })
      .def_property_readonly(
          "sz", [](const Trajectory& t) { return bloch_column(t, &BlochVector::z); })
      .def_property_readonly(
          "energy", [](const Trajectory& t) { return t.energy; })
      .def_property_readonly(
          "norm", [](const Trajectory& t) { return t.norm; })
      .def("__len__", &Trajectory::size);

  py::class_<ScenarioSummary>(m, "ScenarioSummary")
      .def_readonly("z_numeric", &ScenarioSummary::z_numeric)
      .def_readonly("z_numeric_full", &ScenarioSummary::z_numeric_full)
      .def_readonly("z_diag", &ScenarioSummary::z_diag)
      .def_readonly("fluctuation", &ScenarioSummary::fluctuation)
      .def_readonly("z_stderr", &ScenarioSummary::z_stderr)
      .def_readonly("expected", &ScenarioSummary::expected)
      .def_readonly("residual", &ScenarioSummary::residual);

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("config", &ScenarioResult::config)
      .def_readonly("resolved_method", &ScenarioResult::resolved_method)
      .def_readonly("t_max", &ScenarioResult::t_max)
      .def_readonly("trajectory", &ScenarioResult::trajectory)
      .def_readonly("summary", &ScenarioResult::summary);
  m.def("run_scenario", &run_scenario, py::arg("config"),
        py::arg("params") = RunParams{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<ScanPoint>(m, "ScanPoint")
      .def_readonly("param", &ScanPoint::param)
      .def_readonly("z_avg", &ScanPoint::z_avg)
      .def_readonly("residual", &ScanPoint::residual);
  py::class_<DetuneScan>(m, "DetuneScan")
      .def_readonly("points", &DetuneScan::points)
      .def_readonly("best", &DetuneScan::best)
      .def_readonly("degenerate", &DetuneScan::degenerate);
  m.def("detune_scan", &detune_scan, py::arg("config"),
        py::arg("window") = 0.002, py::arg("steps") = 21,
        py::call_guard<py::gil_scoped_release>());

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("gamma", &SweepPoint::gamma)
      .def_readonly("z_avg", &SweepPoint::z_avg)
      .def_readonly("residual", &SweepPoint::residual)
      .def_readonly("fluctuation", &SweepPoint::fluctuation);
  m.def(
      "gamma_sweep",
      [](const ModelConfig& config, const std::vector<double>& gammas,
         const RunParams& params) {
        return gamma_sweep(config, gammas, params);
      },
      py::arg("config"), py::arg("gammas"),
      py::arg("params") = RunParams{.method = Method::Projected},
      py::call_guard<py::gil_scoped_release>());

  py::class_<Histogram>(m, "Histogram")
      .def_readonly("centers", &Histogram::centers)
      .def_readonly("counts", &Histogram::counts);
  py::class_<EnsembleStats>(m, "EnsembleStats")
      .def_readonly("mean", &EnsembleStats::mean)
      .def_readonly("stddev", &EnsembleStats::stddev)
      .def_readonly("mass_below", &EnsembleStats::mass_below);
  py::class_<EnsembleResult>(m, "EnsembleResult")
      .def_readonly("values", &EnsembleResult::values)
      .def_readonly("hist", &EnsembleResult::hist)
      .def_readonly("stats", &EnsembleResult::stats);
  m.def("ensemble_histogram", &ensemble_histogram, py::arg("config"),
        py::arg("n_realizations"), py::arg("bin_width") = 0.02,
        py::call_guard<py::gil_scoped_release>());

  py::class_<DualityResult>(m, "DualityResult")
      .def_readonly("original", &DualityResult::original)
      .def_readonly("dual", &DualityResult::dual)
      .def_readonly("max_pointwise_sum", &DualityResult::max_pointwise_sum);
  m.def("duality_run", &duality_run, py::arg("config"), py::arg("mode"),
        py::arg("params") = RunParams{},
        py::call_guard<py::gil_scoped_release>());
}
