#pragma once
#include <optional>
#include <string>
#include <vector>

#include "phl/spectrum.hpp"

namespace phl {

enum class SpecMode { A1 = 0, A2 = 1, B = 2 };

struct Peak {
  int index;
  double frequency;
  double height;
  double prominence;
};

enum class WidthMethod { HalfMaxInterpolation, LorentzianFit };

struct LinewidthResult {
  double peakFrequency = 0;
  double fwhm = 0;
  WidthMethod method = WidthMethod::HalfMaxInterpolation;
  double uncertainty = 0;  // one grid bin plus the propagated stderr band
  bool resolved = false;   // fwhm >= 5 * grid resolution
};

// Local maxima with prominence >= minProminence * global max, sorted by frequency.
std::vector<Peak> findPeaks(const SpectrumData& spec, SpecMode mode, double minProminence);

// Half-max interpolation width of peaks[which]. Throws "overlapping peaks" when
// a half crossing is not found before an adjacent listed peak or the grid edge.
LinewidthResult fwhmWidth(const SpectrumData& spec, SpecMode mode,
                          const std::vector<Peak>& peaks, std::size_t which);

struct LorentzianFitResult {
  double center, halfWidth, amplitude;
  double residual;  // rms misfit over the window, relative to the peak height
};

// Least-squares Lorentzian over +-windowBins around the peak; cross-check only.
LorentzianFitResult lorentzianFit(const SpectrumData& spec, SpecMode mode, const Peak& peak,
                                  int windowBins);

// Half-maximum width of the emission structure around the spectral maximum.
// Below threshold (lasing = false) the crossings walk outward from the argmax,
// giving the width of the tallest beat line alone.  Above threshold thermal
// noise dents or even splits the top of the lasing line into relaxation
// sidebands, so the outermost half-max crossings track the structure as a
// whole instead of one horn.  Throws when the spectrum carries no power.
LinewidthResult structureWidth(const SpectrumData& spec, SpecMode mode, bool lasing);

struct PowerlawFit {
  double exponent, prefactor, stderrExponent;
};

PowerlawFit powerlawFit(const std::vector<double>& xs, const std::vector<double>& ys);

enum class SweepKind { Drive, Nbar };

struct SweepRow {
  double sweptValue = 0;
  double intensity[3] = {0, 0, 0};                // time-averaged |a1|^2, |a2|^2, |b|^2
  std::optional<LinewidthResult> width[3];        // structure width per mode
  int peakCountA2 = 0;
  std::optional<double> doubletSeparation;        // below threshold only
  bool ok = true;
  std::string error;
};

struct SweepTable {
  SweepKind kind;
  std::vector<SweepRow> rows;
  SystemParams fixedParams;
  SimConfig baseConfig;
  std::optional<PowerlawFit> exponentFit;  // nbar sweeps
};

// Per row: ensemble, spectra, intensities, peak census, structure widths.
// A row whose tracked line comes back unresolved doubles the segment length,
// up to 3 times, holding the segment count. Row failures are recorded and the
// sweep continues.
SweepTable sweepDrive(const SystemParams& p, const std::vector<double>& driveGrid,
                      const SimConfig& base);

SweepTable sweepNbar(const SystemParams& p, const std::vector<double>& nbarGrid,
                     const SimConfig& base);

double defaultMinProminence();

}  // namespace phl
