#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phl/linewidth.hpp"
#include "phl/presets.hpp"
#include "phl/stability.hpp"

namespace py = pybind11;
using namespace phl;

PYBIND11_MODULE(phonlase, m) {
  m.doc() = "three-mode optomechanical phonon laser: states, stability, spectra, linewidths";

  py::register_exception<Error>(m, "PhlError");

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("gamma1", &SystemParams::gamma1)
      .def_readwrite("gamma2", &SystemParams::gamma2)
      .def_readwrite("gammaB", &SystemParams::gammaB)
      .def_readwrite("dOmega2", &SystemParams::dOmega2)
      .def_readwrite("omegaB", &SystemParams::omegaB)
      .def_readwrite("g", &SystemParams::g)
      .def_readwrite("drive", &SystemParams::drive)
      .def_readwrite("nbar", &SystemParams::nbar);

  py::class_<ModeState>(m, "ModeState")
      .def(py::init<>())
      .def_readwrite("a1", &ModeState::a1)
      .def_readwrite("a2", &ModeState::a2)
      .def_readwrite("b", &ModeState::b);

  py::enum_<StateKind>(m, "StateKind")
      .value("Zero", StateKind::Zero)
      .value("Nonzero", StateKind::Nonzero);

  py::class_<StationaryState>(m, "StationaryState")
      .def_readonly("kind", &StationaryState::kind)
      .def_readonly("amplitudes", &StationaryState::amplitudes)
      .def_readonly("deltaOmega", &StationaryState::deltaOmega);

  m.def("validated", &validated);
  m.def("threshold_amplitude", &thresholdAmplitude);
  m.def("existence_amplitude", &existenceAmplitude);
  m.def("frequency_pulling", &phononFrequencyPulling);
  m.def("zero_state", &zeroState);
  m.def("nonzero_state", &nonzeroState);
  m.def("drift", &drift);

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("eigenvalues", &StabilityReport::eigenvalues)
      .def_readonly("max_real_part", &StabilityReport::maxRealPart)
      .def_readonly("zero_modes", &StabilityReport::zeroModes)
      .def_readonly("stable", &StabilityReport::stable);

  m.def("zero_state_stability", [](const SystemParams& p) {
    return eigenSolve(buildZeroJacobian(p, phononFrequencyPulling(p)));
  });
  m.def("nonzero_state_stability",
        [](const SystemParams& p) { return eigenSolve(buildNonzeroJacobian(p)); });
  m.def("threshold_bisect", &thresholdBisect);
  m.def("goldstone_mode", [](const SystemParams& p) {
    const auto v = goldstoneMode(p);
    return std::vector<cplx>(v.data(), v.data() + v.size());
  });

  py::enum_<InitialState>(m, "InitialState")
      .value("AtZero", InitialState::AtZero)
      .value("AtNonzero", InitialState::AtNonzero)
      .value("Custom", InitialState::Custom);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("steps", &SimConfig::steps)
      .def_readwrite("transientSteps", &SimConfig::transientSteps)
      .def_readwrite("sampleStride", &SimConfig::sampleStride)
      .def_readwrite("nTrajectories", &SimConfig::nTrajectories)
      .def_readwrite("masterSeed", &SimConfig::masterSeed)
      .def_readwrite("initialState", &SimConfig::initialState)
      .def_readwrite("customInit", &SimConfig::customInit)
      .def_readwrite("nThreads", &SimConfig::nThreads);

  py::class_<TrajectoryEnsemble>(m, "TrajectoryEnsemble")
      .def_readonly("times", &TrajectoryEnsemble::times)
      .def_readonly("samples", &TrajectoryEnsemble::samples);

  m.def("trajectory_times", &trajectoryTimes);
  m.def("simulate", &simulate);
  m.def("ensemble", &ensemble);

  py::enum_<Window>(m, "Window")
      .value("Rectangular", Window::Rectangular)
      .value("Hann", Window::Hann);

  py::class_<SpectrumData>(m, "SpectrumData")
      .def_readonly("omega", &SpectrumData::omega)
      .def_readonly("s_a1", &SpectrumData::sA1)
      .def_readonly("s_a2", &SpectrumData::sA2)
      .def_readonly("s_b", &SpectrumData::sB)
      .def_readonly("stderr_a1", &SpectrumData::stderrA1)
      .def_readonly("stderr_a2", &SpectrumData::stderrA2)
      .def_readonly("stderr_b", &SpectrumData::stderrB)
      .def_readonly("resolution", &SpectrumData::resolution)
      .def_readonly("advisories", &SpectrumData::advisories);

  m.def("analytic_spectrum", &analyticSpectrum);
  m.def("welch_spectrum", &welchSpectrum);
  m.def("default_omega_grid", &defaultOmegaGrid);

  py::enum_<SpecMode>(m, "SpecMode")
      .value("A1", SpecMode::A1)
      .value("A2", SpecMode::A2)
      .value("B", SpecMode::B);

  py::class_<Peak>(m, "Peak")
      .def_readonly("index", &Peak::index)
      .def_readonly("frequency", &Peak::frequency)
      .def_readonly("height", &Peak::height)
      .def_readonly("prominence", &Peak::prominence);

  py::class_<LinewidthResult>(m, "LinewidthResult")
      .def_readonly("peak_frequency", &LinewidthResult::peakFrequency)
      .def_readonly("fwhm", &LinewidthResult::fwhm)
      .def_readonly("uncertainty", &LinewidthResult::uncertainty)
      .def_readonly("resolved", &LinewidthResult::resolved);

  py::class_<LorentzianFitResult>(m, "LorentzianFitResult")
      .def_readonly("center", &LorentzianFitResult::center)
      .def_readonly("half_width", &LorentzianFitResult::halfWidth)
      .def_readonly("amplitude", &LorentzianFitResult::amplitude)
      .def_readonly("residual", &LorentzianFitResult::residual);

  py::class_<PowerlawFit>(m, "PowerlawFit")
      .def_readonly("exponent", &PowerlawFit::exponent)
      .def_readonly("prefactor", &PowerlawFit::prefactor)
      .def_readonly("stderr_exponent", &PowerlawFit::stderrExponent);

  m.def("find_peaks", &findPeaks);
  m.def("fwhm_width", &fwhmWidth);
  m.def("structure_width", &structureWidth);
  m.def("lorentzian_fit", &lorentzianFit);
  m.def("powerlaw_fit", &powerlawFit);
  m.def("default_min_prominence", &defaultMinProminence);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("swept_value", &SweepRow::sweptValue)
      .def_property_readonly("intensity",
                             [](const SweepRow& r) {
                               return std::vector<double>{r.intensity[0], r.intensity[1],
                                                          r.intensity[2]};
                             })
      .def_property_readonly("width",
                             [](const SweepRow& r) {
                               std::vector<std::optional<LinewidthResult>> w{
                                   r.width[0], r.width[1], r.width[2]};
                               return w;
                             })
      .def_readonly("peak_count_a2", &SweepRow::peakCountA2)
      .def_readonly("doublet_separation", &SweepRow::doubletSeparation)
      .def_readonly("ok", &SweepRow::ok)
      .def_readonly("error", &SweepRow::error);

  py::class_<SweepTable>(m, "SweepTable")
      .def_readonly("rows", &SweepTable::rows)
      .def_readonly("exponent_fit", &SweepTable::exponentFit);

  m.def("sweep_drive", &sweepDrive);
  m.def("sweep_nbar", &sweepNbar);

  m.def("figure_params", &figureParams);
  m.def("default_drive_grid", &defaultDriveGrid);
  m.def("default_nbar_grid", &defaultNbarGrid);
}
