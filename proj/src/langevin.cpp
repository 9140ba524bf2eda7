#include "phl/langevin.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace phl {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr double kAmplitudeGuard = 1e6;

bool sane(const cplx& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::norm(z) < kAmplitudeGuard * kAmplitudeGuard;
}

// crude amplitude scale of the attractor, used only for the accuracy guard
double expectedAmplitude(const SystemParams& p) {
  double amp = p.drive / p.gamma1;              // zero-state carrier
  amp = std::max(amp, 5.0 * std::sqrt(p.nbar)); // thermal excursions
  const double th = thresholdAmplitude(p);
  if (p.drive > th) {
    const auto st = nonzeroState(p).amplitudes;
    amp = std::max({amp, std::abs(st.a1), std::abs(st.a2), std::abs(st.b)});
  }
  return amp;
}

}  // namespace

NoiseRng::NoiseRng(std::uint64_t masterSeed, std::uint64_t trajectoryIndex) {
  // O(1) mix of the pair; trajectory streams never overlap in practice
  std::uint64_t a = masterSeed;
  std::uint64_t b = trajectoryIndex ^ 0xD1B54A32D192ED03ull;
  state_ = splitmix64(a) ^ (splitmix64(b) + 0x9E3779B97F4A7C15ull * trajectoryIndex);
}

std::uint64_t NoiseRng::nextU64() { return splitmix64(state_); }

double NoiseRng::gaussian() {
  if (haveSpare_) {
    haveSpare_ = false;
    return spare_;
  }
  double u1 = static_cast<double>(nextU64() >> 11) * 0x1p-53;
  if (u1 <= 0.0) u1 = 0x1p-53;
  const double u2 = static_cast<double>(nextU64() >> 11) * 0x1p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  haveSpare_ = true;
  return r * std::cos(a);
}

cplx noiseIncrement(NoiseRng& rng, double gammaB, double nbar, double dt) {
  const double var = gammaB * nbar * dt;
  if (var <= 0.0) return cplx(0.0, 0.0);
  const double sigma = std::sqrt(var);
  const double x = sigma * rng.gaussian();
  const double y = sigma * rng.gaussian();
  return cplx(x, y);
}

ModeState step(const ModeState& s, const SystemParams& p, double dt, cplx dW) {
  const ModeState k1 = drift(s, p);
  ModeState pred{s.a1 + dt * k1.a1, s.a2 + dt * k1.a2, s.b + dt * k1.b + dW};
  const ModeState k2 = drift(pred, p);
  ModeState out{s.a1 + 0.5 * dt * (k1.a1 + k2.a1), s.a2 + 0.5 * dt * (k1.a2 + k2.a2),
                s.b + 0.5 * dt * (k1.b + k2.b) + dW};
  if (!sane(out.a1) || !sane(out.a2) || !sane(out.b))
    throw numericalError("trajectory diverged: amplitude left the |a| < 1e6 guard");
  return out;
}

void validateConfig(const SimConfig& c, const SystemParams& p_) {
  const auto p = validated(p_);
  if (!(c.dt > 0) || !std::isfinite(c.dt)) throw validationError("dt must be positive");
  if (c.steps <= 0) throw validationError("steps must be positive");
  if (c.transientSteps < 0) throw validationError("transientSteps must be nonnegative");
  if (c.transientSteps >= c.steps) throw validationError("transientSteps must be smaller than steps");
  if (c.sampleStride < 1) throw validationError("sampleStride must be at least 1");
  if (c.nTrajectories < 1) throw validationError("nTrajectories must be at least 1");
  if (c.nThreads < 0) throw validationError("nThreads must be nonnegative");
  if (c.initialState == InitialState::Custom && !c.customInit)
    throw validationError("custom initial state requested but none provided");

  const double fastest = std::max({std::abs(p.dOmega2), p.omegaB, p.gamma1, p.gamma2, p.gammaB,
                                   p.g * expectedAmplitude(p)});
  if (c.dt * fastest > 0.05) {
    std::ostringstream os;
    os << "dt too coarse: dt * fastest rate = " << c.dt * fastest << " exceeds 0.05";
    throw validationError(os.str());
  }
}

std::vector<double> trajectoryTimes(const SimConfig& c) {
  std::vector<double> t;
  const long long span = c.steps - c.transientSteps;
  if (span <= 0) return t;
  const long long count = span / c.sampleStride;
  t.reserve(count);
  for (long long k = 1; k <= count; ++k)
    t.push_back(static_cast<double>(c.transientSteps + k * c.sampleStride) * c.dt);
  return t;
}

std::vector<ModeState> simulate(const SystemParams& p_, const SimConfig& c, int trajectoryIndex) {
  const auto p = validated(p_);
  validateConfig(c, p);

  NoiseRng rng(c.masterSeed, static_cast<std::uint64_t>(trajectoryIndex));

  ModeState s;
  switch (c.initialState) {
    case InitialState::AtZero:
      s = zeroState(p).amplitudes;
      break;
    case InitialState::AtNonzero:
      s = nonzeroState(p).amplitudes;
      // one thermal kick so the phase of the family decorrelates immediately
      s.b += noiseIncrement(rng, p.gammaB, p.nbar, c.dt);
      break;
    case InitialState::Custom:
      s = *c.customInit;
      break;
  }

  std::vector<ModeState> out;
  out.reserve((c.steps - c.transientSteps) / c.sampleStride);
  for (long long n = 1; n <= c.steps; ++n) {
    const cplx dW = noiseIncrement(rng, p.gammaB, p.nbar, c.dt);
    s = step(s, p, c.dt, dW);
    const long long past = n - c.transientSteps;
    if (past > 0 && past % c.sampleStride == 0) out.push_back(s);
  }
  return out;
}

TrajectoryEnsemble ensemble(const SystemParams& p_, const SimConfig& c) {
  const auto p = validated(p_);
  validateConfig(c, p);

  TrajectoryEnsemble e;
  e.times = trajectoryTimes(c);
  e.samples.resize(c.nTrajectories);
  e.config = c;
  e.params = p;

  int nWorkers = c.nThreads > 0 ? c.nThreads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nWorkers = std::min(nWorkers, c.nTrajectories);

  std::atomic<int> next{0};
  std::vector<std::string> failures(c.nTrajectories);
  const auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= c.nTrajectories) return;
      try {
        e.samples[idx] = simulate(p, c, idx);
      } catch (const std::exception& ex) {
        failures[idx] = ex.what();
      }
    }
  };

  if (nWorkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nWorkers);
    for (int i = 0; i < nWorkers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream bad;
  int nBad = 0;
  for (int i = 0; i < c.nTrajectories; ++i) {
    if (failures[i].empty()) continue;
    if (nBad++) bad << "; ";
    bad << "trajectory " << i << ": " << failures[i];
  }
  if (nBad) throw numericalError(bad.str());
  return e;
}

}  // namespace phl
