#include "phl/presets.hpp"

#include <algorithm>
#include <cmath>

namespace phl {

namespace {

long long transientSteps(const SystemParams& p, double dt) {
  const double slowest = std::min({p.gamma1, p.gamma2, p.gammaB});
  return static_cast<long long>(std::ceil(5.0 / slowest / dt));
}

SimConfig baseConfig(const SystemParams& p, std::uint64_t seed, int segmentSamples) {
  SimConfig c;
  c.dt = 0.5;
  c.sampleStride = 32;
  c.nTrajectories = 32;
  c.masterSeed = seed;
  c.transientSteps = transientSteps(p, c.dt);
  // 8 whole segments per trajectory
  c.steps = c.transientSteps + 8LL * segmentSamples * c.sampleStride;
  return c;
}

}  // namespace

SystemParams figureParams() { return SystemParams{}; }

SpectrumRunSpec belowThresholdRun(const SystemParams& p, std::uint64_t seed) {
  SpectrumRunSpec spec;
  spec.segmentLength = 4096;  // 65536 time units at dt 0.5, stride 32
  spec.config = baseConfig(p, seed, spec.segmentLength);
  spec.config.initialState = InitialState::AtZero;
  spec.window = Window::Rectangular;
  return spec;
}

SpectrumRunSpec aboveThresholdLineRun(const SystemParams& p, std::uint64_t seed) {
  SpectrumRunSpec spec;
  // 16384 time units per segment: fine enough to resolve the broadened line
  // against its uncertainty band, coarse enough not to starve the census
  spec.segmentLength = 1024;
  spec.config = baseConfig(p, seed, spec.segmentLength);
  spec.config.initialState = InitialState::AtNonzero;
  spec.window = Window::Hann;
  return spec;
}

SpectrumRunSpec sweepRowRun(const SystemParams& p, std::uint64_t seed) {
  SpectrumRunSpec spec;
  spec.segmentLength = 4096;
  spec.config = baseConfig(p, seed, spec.segmentLength);
  spec.config.initialState = InitialState::AtZero;  // the sweep picks per row
  spec.window = Window::Rectangular;                // likewise
  return spec;
}

std::vector<double> defaultDriveGrid(const SystemParams& p) {
  const double th = thresholdAmplitude(p);
  std::vector<double> grid;
  for (double f : {0.3, 0.5, 0.8, 0.95, 1.05, 1.2, 1.5, 2.0, 3.0, 5.0}) grid.push_back(f * th);
  return grid;
}

std::vector<double> defaultNbarGrid() { return {10, 30, 100, 300, 1000}; }

}  // namespace phl
