#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "phl/model.hpp"

namespace phl {

enum class InitialState { AtZero, AtNonzero, Custom };

struct SimConfig {
  double dt = 0.5;
  long long steps = 0;           // total integration steps per trajectory
  long long transientSteps = 0;  // discarded before sampling
  int sampleStride = 32;
  int nTrajectories = 1;
  std::uint64_t masterSeed = 1;
  InitialState initialState = InitialState::AtZero;
  std::optional<ModeState> customInit;
  // Worker count for ensemble(); 0 = hardware concurrency. Results are
  // byte-identical for any value: randomness is a pure function of
  // (masterSeed, trajectoryIndex) and reduction order is fixed.
  int nThreads = 0;
};

void validateConfig(const SimConfig& c, const SystemParams& p);

// sample instants produced by simulate() for this config
std::vector<double> trajectoryTimes(const SimConfig& c);

struct TrajectoryEnsemble {
  std::vector<double> times;
  std::vector<std::vector<ModeState>> samples;  // [trajectory][sample]
  SimConfig config;
  SystemParams params;
};

// Deterministic stream: splitmix64 mixing plus an explicit Box-Muller pair,
// stable across platforms (no std::normal_distribution).
class NoiseRng {
public:
  NoiseRng(std::uint64_t masterSeed, std::uint64_t trajectoryIndex);
  double gaussian();  // standard normal
  std::uint64_t nextU64();

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool haveSpare_ = false;
};

// dW = x + iy, x and y independent N(0, gammaB*nbar*dt), so <|dW|^2> = 2*gammaB*nbar*dt.
cplx noiseIncrement(NoiseRng& rng, double gammaB, double nbar, double dt);

// One stochastic Heun step, additive noise on the phonon only.
// Throws "trajectory diverged" past the |amplitude| > 1e6 guard.
ModeState step(const ModeState& s, const SystemParams& p, double dt, cplx dW);

std::vector<ModeState> simulate(const SystemParams& p, const SimConfig& c, int trajectoryIndex);

TrajectoryEnsemble ensemble(const SystemParams& p, const SimConfig& c);

}  // namespace phl
