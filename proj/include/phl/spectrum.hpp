#pragma once
#include <string>
#include <vector>

#include "phl/langevin.hpp"

namespace phl {

enum class Window { Rectangular, Hann };
enum class SpectrumSource { Analytic, Simulated };

// Frequency axis: omega holds lab-frame offsets from the drive line, i.e. a pure
// signal e^{-i nu t} in the rotating frame appears at omega = +nu. PSD units are
// occupation per unit frequency: the integral over omega equals the mean square
// amplitude.
struct SpectrumData {
  std::vector<double> omega;
  std::vector<double> sA1, sA2, sB;
  std::vector<double> stderrA1, stderrA2, stderrB;  // empty for analytic
  SpectrumSource source;
  double resolution;
  // non-fatal notes, e.g. "unresolved line: sB" when a line spans < 5 bins
  std::vector<std::string> advisories;
};

// Zero-state fluctuation spectra from the 3x3 resolvent with phonon-only
// diffusion. Refuses an unstable linearization (use the simulated path above
// threshold; the zero eigenvalue there makes the carrier bin diverge).
SpectrumData analyticSpectrum(const SystemParams& p, double deltaOmega,
                              const std::vector<double>& omegaGrid);

// Segment-averaged periodograms, non-overlapping segments across all
// trajectories; stderr from inter-segment scatter. segmentLength is in samples;
// resolution = 2*pi/(segmentLength*dt*sampleStride). Needs >= 8 segments.
SpectrumData welchSpectrum(const TrajectoryEnsemble& e, int segmentLength, Window window);

std::vector<double> defaultOmegaGrid(int segmentLength, double sampleDt);

}  // namespace phl
