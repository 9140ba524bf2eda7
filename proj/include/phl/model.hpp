#pragma once
#include <complex>

#include "phl/error.hpp"

namespace phl {

using cplx = std::complex<double>;

// All rates and frequencies are in units of a reference frequency w0; time in 1/w0.
// Internally everything lives in the frame rotating at the drive frequency w1:
// the optical amplitudes are rotated, the phonon amplitude is not.
struct SystemParams {
  double gamma1 = 2e-4;   // amplitude decay, first optical mode
  double gamma2 = 2e-4;   // amplitude decay, second optical mode
  double gammaB = 2e-4;   // amplitude decay, phonon mode
  double dOmega2 = 5e-3;  // detuning w2 - w1
  double omegaB = 5e-3;   // phonon frequency
  double g = 1e-4;        // coupling magnitude, taken real positive
  double drive = 5e-3;    // external wave amplitude
  double nbar = 100.0;    // mean thermal phonon number
};

// Throws with the first violated invariant named.
SystemParams validated(const SystemParams& raw);

struct ModeState {
  cplx a1{}, a2{}, b{};
};

enum class StateKind { Zero, Nonzero };

struct StationaryState {
  StateKind kind;
  ModeState amplitudes;  // representative of the phase-degenerate family: a2 real >= 0
  double deltaOmega;     // generated-phonon frequency pulling
};

// Lasing threshold: above it the zero state loses stability.
double thresholdAmplitude(const SystemParams& p);

// Existence edge of the nonzero family; <= thresholdAmplitude always.
double existenceAmplitude(const SystemParams& p);

// Frequency pulling of the generated phonon, fixed by the stationarity condition.
double phononFrequencyPulling(const SystemParams& p);

StationaryState zeroState(const SystemParams& p);

// Throws "below threshold" for drive < thresholdAmplitude.
// The returned amplitudes are Newton-polished so the drift residual is at machine level.
StationaryState nonzeroState(const SystemParams& p);

// Noiseless rotating-frame time derivative.
ModeState drift(const ModeState& s, const SystemParams& p);

// Detunings shifted into the frame co-rotating at deltaOmega, where the
// nonzero family becomes a true fixed point of drift().
SystemParams withPulledDetunings(const SystemParams& p, double deltaOmega);

}  // namespace phl
