#pragma once
#include <vector>

#include "phl/langevin.hpp"
#include "phl/spectrum.hpp"

namespace phl {

// Figure-caption parameter set. Individual recipes override drive and nbar.
SystemParams figureParams();

// Shared simulation defaults: dt 0.5, stride 32, 32 trajectories, transient
// 5/min(gamma), 8 segments per trajectory (256 segments total).
struct SpectrumRunSpec {
  SimConfig config;
  int segmentLength;  // samples
  Window window;
};

// Below-threshold spectra (doublet regime): 65536-time-unit segments, rectangular window.
SpectrumRunSpec belowThresholdRun(const SystemParams& p, std::uint64_t seed);

// Above-threshold line spectra: coarser 8192-time-unit segments, Hann window.
SpectrumRunSpec aboveThresholdLineRun(const SystemParams& p, std::uint64_t seed);

// Sweep rows (both kinds): 65536-time-unit segments, window chosen per row regime.
SpectrumRunSpec sweepRowRun(const SystemParams& p, std::uint64_t seed);

std::vector<double> defaultDriveGrid(const SystemParams& p);
std::vector<double> defaultNbarGrid();

}  // namespace phl
