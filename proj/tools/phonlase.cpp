#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "phl/linewidth.hpp"
#include "phl/presets.hpp"
#include "phl/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phl;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmtShort(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Everything the flags and the config file can set. Flags override config
// values because the config is applied before CLI11 writes into the fields.
struct CliState {
  SystemParams params;
  double dt = 0.5;
  long long steps = -1;      // -1: derive from the segment budget
  long long transient = -1;  // -1: derive as 5/min(gamma)
  int trajectories = 32;
  int segmentLength = -1;  // -1: derive from the 65536-time-unit rule
  std::string window;      // "", "rect", "hann"
  std::uint64_t seed = 1;
  std::string outDirFlag, outDirConfig, configFile;
  bool json = false;
  bool plotStub = false;
};

double parseDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw validationError("config value for " + key + " is not a number: " + v);
  }
}

long long parseInt(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw validationError("config value for " + key + " is not an integer: " + v);
  }
}

void applyConfigFile(CliState& st, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validationError("cannot read config file " + path);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string entry = trim(line);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw validationError("config line " + std::to_string(lineNo) + " is not key=value");
    const std::string key = trim(entry.substr(0, eq));
    const std::string val = trim(entry.substr(eq + 1));

    if (key == "gamma1") st.params.gamma1 = parseDouble(key, val);
    else if (key == "gamma2") st.params.gamma2 = parseDouble(key, val);
    else if (key == "gammab") st.params.gammaB = parseDouble(key, val);
    else if (key == "domega2") st.params.dOmega2 = parseDouble(key, val);
    else if (key == "omegab") st.params.omegaB = parseDouble(key, val);
    else if (key == "g") st.params.g = parseDouble(key, val);
    else if (key == "drive") st.params.drive = parseDouble(key, val);
    else if (key == "nbar") st.params.nbar = parseDouble(key, val);
    else if (key == "dt") st.dt = parseDouble(key, val);
    else if (key == "steps") st.steps = parseInt(key, val);
    else if (key == "transient") st.transient = parseInt(key, val);
    else if (key == "trajectories") st.trajectories = static_cast<int>(parseInt(key, val));
    else if (key == "segment-length") st.segmentLength = static_cast<int>(parseInt(key, val));
    else if (key == "window") st.window = val;
    else if (key == "seed") st.seed = static_cast<std::uint64_t>(parseInt(key, val));
    else if (key == "out-dir") st.outDirConfig = val;
    else throw validationError("unknown config key: " + key);
  }
}

fs::path resolveOutDir(const CliState& st) {
  if (!st.outDirFlag.empty()) return st.outDirFlag;
  if (!st.outDirConfig.empty()) return st.outDirConfig;
  if (const char* env = std::getenv("PHONLASE_OUT_DIR"); env && *env) return env;
  return "out";
}

Window parseWindow(const std::string& w) {
  if (w == "rect") return Window::Rectangular;
  if (w == "hann") return Window::Hann;
  throw validationError("window must be rect or hann, got " + w);
}

const char* windowName(Window w) { return w == Window::Hann ? "hann" : "rect"; }

// resolved simulation setup for one run
struct RunSetup {
  SimConfig config;
  int segmentLength;
  Window window;
};

RunSetup resolveRun(const CliState& st, const SystemParams& p) {
  RunSetup r;
  r.config.dt = st.dt;
  r.config.sampleStride = 32;
  r.config.nTrajectories = st.trajectories;
  r.config.masterSeed = st.seed;
  const double slowest = std::min({p.gamma1, p.gamma2, p.gammaB});
  r.config.transientSteps =
      st.transient >= 0 ? st.transient
                        : static_cast<long long>(std::ceil(5.0 / slowest / st.dt));
  const double sampleDt = r.config.dt * r.config.sampleStride;
  r.segmentLength = st.segmentLength > 0
                        ? st.segmentLength
                        : static_cast<int>(std::llround(65536.0 / sampleDt));
  r.config.steps = st.steps > 0
                       ? st.steps
                       : r.config.transientSteps + 8LL * r.segmentLength * r.config.sampleStride;
  const bool above = p.drive > thresholdAmplitude(p);
  r.window = st.window.empty() ? (above ? Window::Hann : Window::Rectangular)
                               : parseWindow(st.window);
  r.config.initialState = above ? InitialState::AtNonzero : InitialState::AtZero;
  return r;
}

void writeSpectrumCsv(const fs::path& file, const SpectrumData& s) {
  std::ofstream out(file);
  if (!out) throw validationError("cannot write " + file.string());
  out << "omega,s_a1,s_a2,s_b,stderr_a1,stderr_a2,stderr_b\n";
  const bool hasErr = !s.stderrA1.empty();
  for (std::size_t i = 0; i < s.omega.size(); ++i) {
    out << fmt17(s.omega[i]) << ',' << fmt17(s.sA1[i]) << ',' << fmt17(s.sA2[i]) << ','
        << fmt17(s.sB[i]) << ',' << fmt17(hasErr ? s.stderrA1[i] : 0.0) << ','
        << fmt17(hasErr ? s.stderrA2[i] : 0.0) << ',' << fmt17(hasErr ? s.stderrB[i] : 0.0)
        << '\n';
  }
}

void writeSweepCsv(const fs::path& file, const SweepTable& t) {
  std::ofstream out(file);
  if (!out) throw validationError("cannot write " + file.string());
  out << "swept_value,I_a1,I_a2,I_b,peak_count_a2,fwhm_a2,fwhm_b,peak_freq,resolved\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : t.rows) {
    const double fa2 = r.width[1] ? r.width[1]->fwhm : nan;
    const double fb = r.width[2] ? r.width[2]->fwhm : nan;
    const double pf = r.width[1] ? r.width[1]->peakFrequency : nan;
    const int resolved = r.width[1] && r.width[1]->resolved ? 1 : 0;
    out << fmt17(r.sweptValue) << ',' << fmt17(r.intensity[0]) << ',' << fmt17(r.intensity[1])
        << ',' << fmt17(r.intensity[2]) << ',' << r.peakCountA2 << ',' << fmt17(fa2) << ','
        << fmt17(fb) << ',' << fmt17(pf) << ',' << resolved << '\n';
  }
}

void writeTrajectoryCsv(const fs::path& file, const std::vector<double>& times,
                        const std::vector<ModeState>& samples) {
  std::ofstream out(file);
  if (!out) throw validationError("cannot write " + file.string());
  out << "time,I_a1,I_a2,I_b\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << fmt17(times[i]) << ',' << fmt17(std::norm(samples[i].a1)) << ','
        << fmt17(std::norm(samples[i].a2)) << ',' << fmt17(std::norm(samples[i].b)) << '\n';
  }
}

void writePlotStub(const fs::path& dir, std::vector<std::string>& outputs) {
  const fs::path file = dir / "plot_stub.py";
  std::ofstream out(file);
  out << "# generic stub: overlays every spectrum/sweep csv found next to it\n"
         "import csv, glob, os, sys\n"
         "try:\n"
         "    import matplotlib.pyplot as plt\n"
         "except ImportError:\n"
         "    sys.exit('matplotlib not available')\n"
         "for name in sorted(glob.glob(os.path.join(os.path.dirname(__file__) or '.', '*.csv'))):\n"
         "    with open(name) as f:\n"
         "        rows = list(csv.reader(f))\n"
         "    head, data = rows[0], rows[1:]\n"
         "    xs = [float(r[0]) for r in data]\n"
         "    plt.figure()\n"
         "    for c in range(1, min(4, len(head))):\n"
         "        plt.plot(xs, [float(r[c]) for r in data], label=head[c])\n"
         "    plt.xlabel(head[0]); plt.legend(); plt.title(os.path.basename(name))\n"
         "    plt.savefig(name.replace('.csv', '.png'))\n";
  outputs.push_back("plot_stub.py");
}

void writeManifest(const fs::path& dir, const std::string& command, const CliState& st,
                   const SystemParams& p, const RunSetup* run,
                   const std::vector<std::string>& outputs, double durationSeconds) {
  std::ofstream out(dir / (command + "_manifest.txt"));
  out << "command: " << command << '\n';
  out << "version: " << kVersion << '\n';
  out << "params:\n";
  out << "  gamma1: " << fmt17(p.gamma1) << '\n';
  out << "  gamma2: " << fmt17(p.gamma2) << '\n';
  out << "  gammab: " << fmt17(p.gammaB) << '\n';
  out << "  domega2: " << fmt17(p.dOmega2) << '\n';
  out << "  omegab: " << fmt17(p.omegaB) << '\n';
  out << "  g: " << fmt17(p.g) << '\n';
  out << "  drive: " << fmt17(p.drive) << '\n';
  out << "  nbar: " << fmt17(p.nbar) << '\n';
  out << "config:\n";
  out << "  source: " << (st.configFile.empty() ? "none" : st.configFile) << '\n';
  if (run) {
    out << "  dt: " << fmt17(run->config.dt) << '\n';
    out << "  steps: " << run->config.steps << '\n';
    out << "  transient: " << run->config.transientSteps << '\n';
    out << "  stride: " << run->config.sampleStride << '\n';
    out << "  trajectories: " << run->config.nTrajectories << '\n';
    out << "  segment-length: " << run->segmentLength << '\n';
    out << "  window: " << windowName(run->window) << '\n';
  } else {
    out << "  dt: " << fmt17(st.dt) << '\n';
  }
  out << "seed: " << st.seed << '\n';
  out << "units: frequencies and rates in w0, time in 1/w0, psd in occupation per w0\n";
  out << "outputs:\n";
  for (const auto& f : outputs) out << "  " << f << '\n';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", durationSeconds);
  out << "duration: " << buf << " s\n";
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// ---- subcommand bodies ----------------------------------------------------

int gExitStatus = 0;

void cmdSteady(const CliState& st) {
  Timer timer;
  const auto p = validated(st.params);
  const double th = thresholdAmplitude(p);
  const double exi = existenceAmplitude(p);
  const double dw = phononFrequencyPulling(p);
  const auto zero = zeroState(p);
  const double iZero = std::norm(zero.amplitudes.a1);

  bool exists = p.drive > th;
  double iN[3] = {0, 0, 0};
  double dwN = 0;
  if (exists) {
    const auto nz = nonzeroState(p);
    iN[0] = std::norm(nz.amplitudes.a1);
    iN[1] = std::norm(nz.amplitudes.a2);
    iN[2] = std::norm(nz.amplitudes.b);
    dwN = nz.deltaOmega;
  }

  if (st.json) {
    json j;
    j["thresholdAmplitude"] = th;
    j["existenceAmplitude"] = exi;
    j["frequencyPulling"] = dw;
    j["zero"] = {{"I_a1", iZero}, {"I_a2", 0.0}, {"I_b", 0.0}};
    if (exists)
      j["nonzero"] = {{"I_a1", iN[0]}, {"I_a2", iN[1]}, {"I_b", iN[2]}, {"deltaOmega", dwN}};
    else
      j["nonzero"] = nullptr;
    j["nonzeroExists"] = exists;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "threshold amplitude:  " << fmtShort(th) << '\n';
    std::cout << "existence amplitude:  " << fmtShort(exi) << '\n';
    std::cout << "frequency pulling:    " << fmtShort(dw) << '\n';
    std::cout << "zero state:    I_a1 = " << fmtShort(iZero) << ", I_a2 = 0, I_b = 0\n";
    if (exists)
      std::cout << "nonzero state: I_a1 = " << fmtShort(iN[0]) << ", I_a2 = " << fmtShort(iN[1])
                << ", I_b = " << fmtShort(iN[2]) << ", deltaOmega = " << fmtShort(dwN) << '\n';
    else
      std::cout << "nonzero state: does not exist below threshold\n";
  }

  const fs::path dir = resolveOutDir(st);
  fs::create_directories(dir);
  writeManifest(dir, "steady", st, p, nullptr, {}, timer.seconds());
}

void cmdStability(const CliState& st, const std::string& which) {
  Timer timer;
  const auto p = validated(st.params);
  const double dw = phononFrequencyPulling(p);
  const Linearization lin =
      which == "zero" ? buildZeroJacobian(p, dw) : buildNonzeroJacobian(p);
  const auto rep = eigenSolve(lin);

  if (st.json) {
    json j;
    j["which"] = which;
    j["frameFrequency"] = lin.frameFrequency;
    j["eigenvalues"] = json::array();
    for (const auto& l : rep.eigenvalues)
      j["eigenvalues"].push_back({{"re", l.real()}, {"im", l.imag()}});
    j["maxRealPart"] = rep.maxRealPart;
    j["zeroModes"] = rep.zeroModes;
    j["stable"] = rep.stable;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "linearization about the " << which << " state, frame frequency "
              << fmtShort(lin.frameFrequency) << '\n';
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
      std::cout << "  lambda" << i + 1 << " = " << fmtShort(rep.eigenvalues[i].real())
                << (rep.eigenvalues[i].imag() >= 0 ? " + " : " - ")
                << fmtShort(std::abs(rep.eigenvalues[i].imag())) << " i\n";
    std::cout << "max real part: " << fmtShort(rep.maxRealPart) << '\n';
    std::cout << "zero modes:    " << rep.zeroModes << '\n';
    std::cout << "verdict:       " << (rep.stable ? "stable" : "unstable") << '\n';
  }

  const fs::path dir = resolveOutDir(st);
  fs::create_directories(dir);
  writeManifest(dir, "stability", st, p, nullptr, {}, timer.seconds());
}

void cmdSpectrum(const CliState& st, const std::string& mode) {
  Timer timer;
  const auto p = validated(st.params);
  const auto run = resolveRun(st, p);
  const fs::path dir = resolveOutDir(st);
  fs::create_directories(dir);
  std::vector<std::string> outputs;

  if (mode == "analytic" || mode == "both") {
    const auto grid = defaultOmegaGrid(run.segmentLength, run.config.dt * run.config.sampleStride);
    const auto spec = analyticSpectrum(p, phononFrequencyPulling(p), grid);
    writeSpectrumCsv(dir / "spectrum_analytic.csv", spec);
    outputs.push_back("spectrum_analytic.csv");
  }
  if (mode == "simulated" || mode == "both") {
    const auto ens = ensemble(p, run.config);
    const auto spec = welchSpectrum(ens, run.segmentLength, run.window);
    writeSpectrumCsv(dir / "spectrum_simulated.csv", spec);
    outputs.push_back("spectrum_simulated.csv");
    for (const auto& a : spec.advisories) std::cerr << "advisory: " << a << '\n';
  }
  if (st.plotStub) writePlotStub(dir, outputs);
  writeManifest(dir, "spectrum", st, p, &run, outputs, timer.seconds());
}

void reportSweep(const SweepTable& t) {
  int bad = 0;
  for (const auto& r : t.rows)
    if (!r.ok) {
      ++bad;
      std::cerr << "row " << fmtShort(r.sweptValue) << " failed: " << r.error << '\n';
    }
  if (t.exponentFit)
    std::cout << "linewidth exponent: " << fmtShort(t.exponentFit->exponent) << " +- "
              << fmtShort(t.exponentFit->stderrExponent) << '\n';
  if (t.kind == SweepKind::Drive) {
    // non-monotonicity witness: the widest resolved line over the grid
    const SweepRow* widest = nullptr;
    for (const auto& r : t.rows)
      if (r.ok && r.width[1] && r.width[1]->resolved &&
          (!widest || r.width[1]->fwhm > widest->width[1]->fwhm))
        widest = &r;
    if (widest)
      std::cout << "widest line at drive " << fmtShort(widest->sweptValue) << " (fwhm "
                << fmtShort(widest->width[1]->fwhm) << ")\n";
  }
  if (bad) gExitStatus = 4;
}

void cmdSweep(const CliState& st, const std::string& kind, const std::string& csvName) {
  Timer timer;
  const auto p = validated(st.params);
  const auto run = resolveRun(st, p);
  const fs::path dir = resolveOutDir(st);
  fs::create_directories(dir);

  SweepTable table = kind == "drive" ? sweepDrive(p, defaultDriveGrid(p), run.config)
                                     : sweepNbar(p, defaultNbarGrid(), run.config);
  writeSweepCsv(dir / csvName, table);
  std::vector<std::string> outputs{csvName};
  if (st.plotStub) writePlotStub(dir, outputs);
  reportSweep(table);
  writeManifest(dir, kind == "drive" ? "sweep_drive" : "sweep_nbar", st, p, &run, outputs,
                timer.seconds());
}

void cmdFig1(const CliState& st) {
  Timer timer;
  auto p = validated(st.params);
  const fs::path dir = resolveOutDir(st);
  fs::create_directories(dir);
  std::vector<std::string> outputs;

  SimConfig c;
  c.dt = st.dt;
  c.sampleStride = 32;
  c.nTrajectories = 1;
  c.transientSteps = 0;

  // (a) below threshold: thermally driven doublet regime
  {
    SystemParams q = p;
    q.drive = 5e-3;
    c.steps = 400000;
    c.masterSeed = st.seed;
    c.initialState = InitialState::AtZero;
    writeTrajectoryCsv(dir / "fig1a_below_threshold.csv", trajectoryTimes(c), simulate(q, c, 0));
    outputs.push_back("fig1a_below_threshold.csv");
  }
  // (b) noiseless growth out of a small phonon seed
  {
    SystemParams q = p;
    q.drive = 1.5e-2;
    q.nbar = 0;
    c.steps = 40000;
    c.masterSeed = st.seed + 1;
    c.initialState = InitialState::Custom;
    c.customInit = zeroState(q).amplitudes;
    c.customInit->b = 1e-3;
    writeTrajectoryCsv(dir / "fig1b_growth.csv", trajectoryTimes(c), simulate(q, c, 0));
    c.customInit.reset();
    outputs.push_back("fig1b_growth.csv");
  }
  // (c) developed oscillation with thermal noise
  {
    SystemParams q = p;
    q.drive = 1.5e-2;
    c.steps = 400000;
    c.masterSeed = st.seed + 2;
    c.initialState = InitialState::AtNonzero;
    writeTrajectoryCsv(dir / "fig1c_lasing.csv", trajectoryTimes(c), simulate(q, c, 0));
    outputs.push_back("fig1c_lasing.csv");
  }
  if (st.plotStub) writePlotStub(dir, outputs);
  writeManifest(dir, "fig1", st, p, nullptr, outputs, timer.seconds());
}

void cmdFig23(const CliState& st, bool below) {
  Timer timer;
  auto p = validated(st.params);
  p.drive = below ? 5e-3 : 3e-2;
  const fs::path dir = resolveOutDir(st);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  const std::string recipe = below ? "fig2" : "fig3";

  RunSetup lastRun{};
  int k = 0;
  for (double nbar : {10.0, 100.0}) {
    SystemParams q = p;
    q.nbar = nbar;
    const auto spec =
        below ? belowThresholdRun(q, st.seed + k) : aboveThresholdLineRun(q, st.seed + k);
    ++k;
    RunSetup run{spec.config, spec.segmentLength, spec.window};
    if (st.trajectories != 32) run.config.nTrajectories = st.trajectories;
    lastRun = run;
    const auto ens = ensemble(q, run.config);
    const auto sim = welchSpectrum(ens, run.segmentLength, run.window);
    const std::string simName =
        recipe + "_sim_nbar" + std::to_string(static_cast<int>(nbar)) + ".csv";
    writeSpectrumCsv(dir / simName, sim);
    outputs.push_back(simName);
    if (below) {
      const auto grid =
          defaultOmegaGrid(run.segmentLength, run.config.dt * run.config.sampleStride);
      const auto ana = analyticSpectrum(q, phononFrequencyPulling(q), grid);
      const std::string anaName =
          recipe + "_analytic_nbar" + std::to_string(static_cast<int>(nbar)) + ".csv";
      writeSpectrumCsv(dir / anaName, ana);
      outputs.push_back(anaName);
    }
  }
  if (st.plotStub) writePlotStub(dir, outputs);
  writeManifest(dir, recipe, st, p, &lastRun, outputs, timer.seconds());
}

void cmdFig45(const CliState& st, bool nbarSweep) {
  Timer timer;
  auto p = validated(st.params);
  if (nbarSweep)
    p.drive = 5e-2;
  else
    p.nbar = 100;
  const fs::path dir = resolveOutDir(st);
  fs::create_directories(dir);

  const auto spec = sweepRowRun(p, st.seed);
  RunSetup run{spec.config, spec.segmentLength, spec.window};
  if (st.trajectories != 32) run.config.nTrajectories = st.trajectories;

  const std::string recipe = nbarSweep ? "fig4" : "fig5";
  SweepTable table = nbarSweep ? sweepNbar(p, defaultNbarGrid(), run.config)
                               : sweepDrive(p, defaultDriveGrid(p), run.config);
  const std::string csvName = recipe + "_sweep.csv";
  writeSweepCsv(dir / csvName, table);
  std::vector<std::string> outputs{csvName};
  if (st.plotStub) writePlotStub(dir, outputs);
  reportSweep(table);
  writeManifest(dir, recipe, st, p, &run, outputs, timer.seconds());
}

void addCommonFlags(CLI::App* sub, CliState& st) {
  sub->add_option("--gamma1", st.params.gamma1, "amplitude decay of the first optical mode");
  sub->add_option("--gamma2", st.params.gamma2, "amplitude decay of the second optical mode");
  sub->add_option("--gammab", st.params.gammaB, "amplitude decay of the phonon mode");
  sub->add_option("--domega2", st.params.dOmega2, "detuning of the second optical mode");
  sub->add_option("--omegab", st.params.omegaB, "phonon frequency");
  sub->add_option("--g", st.params.g, "three-mode coupling");
  sub->add_option("--drive", st.params.drive, "external wave amplitude");
  sub->add_option("--nbar", st.params.nbar, "mean thermal phonon number");
  sub->add_option("--seed", st.seed, "master seed; identical seeds reproduce outputs bitwise");
  sub->add_option("--dt", st.dt, "integration step");
  sub->add_option("--steps", st.steps, "steps per trajectory (default: segment budget)");
  sub->add_option("--transient", st.transient, "discarded steps (default: 5/min(gamma))");
  sub->add_option("--trajectories", st.trajectories, "ensemble size");
  sub->add_option("--segment-length", st.segmentLength, "segment length in samples");
  sub->add_option("--window", st.window, "spectral window: rect or hann")
      ->check(CLI::IsMember({"rect", "hann"}));
  sub->add_option("--out-dir", st.outDirFlag, "output directory");
  sub->add_option("--config", st.configFile, "flat key=value configuration file");
  sub->add_flag("--json", st.json, "machine-readable report");
  sub->add_flag("--plot-stub", st.plotStub, "emit a generic plotting script next to the data");
}

}  // namespace

int main(int argc, char** argv) {
  CliState st;

  // config before flags, so flags override file values
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        st.configFile = argv[i + 1];
        applyConfigFile(st, st.configFile);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
      break;
    }
  }

  CLI::App app{"three-mode optomechanical phonon laser: states, stability, spectra, sweeps"};
  app.require_subcommand(1);

  auto* steady = app.add_subcommand("steady", "stationary states and thresholds");
  auto* stability = app.add_subcommand("stability", "linearization eigenvalues");
  auto* spectrum = app.add_subcommand("spectrum", "fluctuation spectra");
  auto* sweep = app.add_subcommand("sweep", "linewidth sweeps");
  auto* fig1 = app.add_subcommand("fig1", "time traces across the transition");
  auto* fig2 = app.add_subcommand("fig2", "below-threshold doublet spectra");
  auto* fig3 = app.add_subcommand("fig3", "above-threshold line spectra");
  auto* fig4 = app.add_subcommand("fig4", "linewidth vs thermal occupation");
  auto* fig5 = app.add_subcommand("fig5", "linewidth and intensity vs drive");

  std::string which = "zero", mode = "simulated", kind;
  stability->add_option("--which", which, "zero or nonzero state")
      ->check(CLI::IsMember({"zero", "nonzero"}));
  spectrum->add_option("--mode", mode, "analytic, simulated, or both")
      ->check(CLI::IsMember({"analytic", "simulated", "both"}));
  sweep->add_option("--kind", kind, "drive or nbar")
      ->required()
      ->check(CLI::IsMember({"drive", "nbar"}));

  for (auto* sub : {steady, stability, spectrum, sweep, fig1, fig2, fig3, fig4, fig5})
    addCommonFlags(sub, st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (steady->parsed()) cmdSteady(st);
    else if (stability->parsed()) cmdStability(st, which);
    else if (spectrum->parsed()) cmdSpectrum(st, mode);
    else if (sweep->parsed()) cmdSweep(st, kind, kind == "drive" ? "sweep_drive.csv" : "sweep_nbar.csv");
    else if (fig1->parsed()) cmdFig1(st);
    else if (fig2->parsed()) cmdFig23(st, true);
    else if (fig3->parsed()) cmdFig23(st, false);
    else if (fig4->parsed()) cmdFig45(st, true);
    else if (fig5->parsed()) cmdFig45(st, false);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind == ErrorKind::Validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return gExitStatus;
}
