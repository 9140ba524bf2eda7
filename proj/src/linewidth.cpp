#include "phl/linewidth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace phl {

namespace {

const std::vector<double>& modeValues(const SpectrumData& s, SpecMode m) {
  switch (m) {
    case SpecMode::A1: return s.sA1;
    case SpecMode::A2: return s.sA2;
    default: return s.sB;
  }
}

const std::vector<double>& modeStderr(const SpectrumData& s, SpecMode m) {
  switch (m) {
    case SpecMode::A1: return s.stderrA1;
    case SpecMode::A2: return s.stderrA2;
    default: return s.stderrB;
  }
}

}  // namespace

double defaultMinProminence() { return 0.1; }

std::vector<Peak> findPeaks(const SpectrumData& spec, SpecMode mode, double minProminence) {
  const auto& v = modeValues(spec, mode);
  std::vector<Peak> out;
  const int n = static_cast<int>(v.size());
  if (n < 3) return out;
  double top = 0;
  for (double x : v) top = std::max(top, x);
  if (top <= 0) return out;
  const double cut = minProminence * top;

  for (int i = 1; i + 1 < n; ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
    // prominence: drop to the lowest saddle separating this maximum from
    // higher terrain, measured on the worse side
    double base = 0;
    for (int dir : {-1, +1}) {
      double low = v[i];
      for (int j = i + dir; j >= 0 && j < n; j += dir) {
        if (v[j] > v[i]) break;
        low = std::min(low, v[j]);
      }
      base = std::max(base, low);
    }
    const double prom = v[i] - base;
    if (prom >= cut) out.push_back({i, spec.omega[i], v[i], prom});
  }
  // ascending-frequency order is the scan order already
  return out;
}

LinewidthResult fwhmWidth(const SpectrumData& spec, SpecMode mode,
                          const std::vector<Peak>& peaks, std::size_t which) {
  if (which >= peaks.size()) throw validationError("peak index out of range");
  const auto& v = modeValues(spec, mode);
  const auto& se = modeStderr(spec, mode);
  const int n = static_cast<int>(v.size());
  const int idx = peaks[which].index;
  const double half = 0.5 * v[idx];

  // half crossing on one side, blocked by an adjacent listed peak or the edge
  const auto crossing = [&](int dir, int blockAt, double& where, double& band) {
    for (int j = idx + dir;; j += dir) {
      if (j < 0 || j >= n || j == blockAt) {
        std::ostringstream os;
        os << "overlapping peaks: no half-maximum crossing "
           << (dir < 0 ? "below" : "above") << " the line at " << spec.omega[idx];
        throw numericalError(os.str());
      }
      if (v[j] <= half) {
        const int k = j - dir;  // last bin still above half
        const double slope = (v[k] - v[j]) / (spec.omega[k] - spec.omega[j]);
        where = spec.omega[j] + (half - v[j]) / slope;
        if (!se.empty()) {
          const double sig = 0.5 * (se[j] + se[k]);
          band = std::abs(slope) > 0 ? sig / std::abs(slope) : 0.0;
        } else {
          band = 0.0;
        }
        return;
      }
    }
  };

  double left, right, bandL, bandR;
  crossing(-1, which > 0 ? peaks[which - 1].index : -1, left, bandL);
  crossing(+1, which + 1 < peaks.size() ? peaks[which + 1].index : n, right, bandR);

  LinewidthResult r;
  r.peakFrequency = spec.omega[idx];
  r.fwhm = right - left;
  r.method = WidthMethod::HalfMaxInterpolation;
  r.uncertainty = spec.resolution + bandL + bandR;
  r.resolved = r.fwhm >= 5.0 * spec.resolution;
  return r;
}

LorentzianFitResult lorentzianFit(const SpectrumData& spec, SpecMode mode, const Peak& peak,
                                  int windowBins) {
  const auto& v = modeValues(spec, mode);
  const int n = static_cast<int>(v.size());
  const int lo = std::max(0, peak.index - windowBins);
  const int hi = std::min(n - 1, peak.index + windowBins);
  const int m = hi - lo + 1;
  if (m < 7) throw validationError("fit window needs at least 7 bins");

  // starting point: top of the window and a rough half-max width
  double A = peak.height;
  double w0 = spec.omega[peak.index];
  double gApprox = 2.0 * spec.resolution;
  for (int j = peak.index; j <= hi; ++j)
    if (v[j] <= 0.5 * peak.height) {
      gApprox = spec.omega[j] - w0;
      break;
    }

  Eigen::Vector3d theta(A, w0, gApprox);
  double lambda = 1e-3;
  const auto cost = [&](const Eigen::Vector3d& t) {
    double c = 0;
    for (int j = lo; j <= hi; ++j) {
      const double d = spec.omega[j] - t[1];
      const double den = d * d + t[2] * t[2];
      const double r = v[j] - t[0] * t[2] * t[2] / den;
      c += r * r;
    }
    return c;
  };

  double prev = cost(theta);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (int j = lo; j <= hi; ++j) {
      const double d = spec.omega[j] - theta[1];
      const double g2 = theta[2] * theta[2];
      const double den = d * d + g2;
      const double f = theta[0] * g2 / den;
      const double r = v[j] - f;
      Eigen::Vector3d Jrow(g2 / den, theta[0] * g2 * 2.0 * d / (den * den),
                           theta[0] * 2.0 * theta[2] * d * d / (den * den));
      H += Jrow * Jrow.transpose();
      grad += Jrow * r;
    }
    Eigen::Matrix3d Hd = H;
    Hd.diagonal() *= 1.0 + lambda;
    const Eigen::Vector3d delta = Hd.ldlt().solve(grad);
    Eigen::Vector3d trial = theta + delta;
    trial[2] = std::abs(trial[2]);
    const double c = cost(trial);
    if (c < prev) {
      const double rel = delta.norm() / std::max(1e-300, theta.norm());
      theta = trial;
      prev = c;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (rel < 1e-10) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10;
      if (lambda > 1e12) break;
    }
  }
  if (!converged && lambda > 1e12) throw numericalError("lorentzian fit did not converge");

  LorentzianFitResult out;
  out.amplitude = theta[0];
  out.center = theta[1];
  out.halfWidth = std::abs(theta[2]);
  out.residual = std::sqrt(prev / m) / std::max(1e-300, peak.height);
  return out;
}

PowerlawFit powerlawFit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw validationError("mismatched input lengths");
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw validationError("need at least 3 points");
  for (int i = 0; i < n; ++i)
    if (!(xs[i] > 0) || !(ys[i] > 0))
      throw validationError("nonpositive input, log-log fit undefined");

  double mx = 0, my = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0) throw validationError("degenerate abscissa");

  PowerlawFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  double sse = 0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - (my + fit.exponent * (lx[i] - mx));
    sse += r * r;
  }
  fit.stderrExponent = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  return fit;
}

namespace {

struct RowSpectrum {
  SpectrumData spec;
  double intensity[3];
};

// one ensemble + welch pass at the given segment length
RowSpectrum runRow(const SystemParams& p, const SimConfig& c, int segLen, Window win) {
  const auto ens = ensemble(p, c);
  RowSpectrum r{welchSpectrum(ens, segLen, win), {0, 0, 0}};
  long long count = 0;
  for (const auto& traj : ens.samples) {
    for (const auto& s : traj) {
      r.intensity[0] += std::norm(s.a1);
      r.intensity[1] += std::norm(s.a2);
      r.intensity[2] += std::norm(s.b);
    }
    count += traj.size();
  }
  for (double& x : r.intensity) x /= std::max(1LL, count);
  return r;
}

// Base segment length per row, clipped to the samples available.  ~65536
// time units per segment puts even the narrowest below-threshold doublet
// line (fwhm around 4e-4) near the five-bin resolution floor; the doubling
// loop below recovers the stragglers.
int rowSegmentLength(const SimConfig& c) {
  const double sampleDt = c.dt * c.sampleStride;
  long long seg = std::llround(65536.0 / sampleDt);
  const long long perTraj = (c.steps - c.transientSteps) / c.sampleStride;
  seg = std::min(seg, perTraj);
  return static_cast<int>(std::max(2LL, seg));
}

}  // namespace

LinewidthResult structureWidth(const SpectrumData& spec, SpecMode mode, bool lasing) {
  const auto& v = modeValues(spec, mode);
  const auto& se = modeStderr(spec, mode);
  const int n = static_cast<int>(v.size());
  if (n < 3) throw validationError("spectrum grid too short for a width");
  int pk = 0;
  for (int i = 1; i < n; ++i)
    if (v[i] > v[pk]) pk = i;
  if (!(v[pk] > 0)) throw validationError("spectrum carries no power");
  const double half = 0.5 * v[pk];

  int lo, hi;
  if (lasing) {
    lo = 0;
    while (lo < n && v[lo] < half) ++lo;
    hi = n - 1;
    while (hi >= 0 && v[hi] < half) --hi;
  } else {
    lo = pk;
    while (lo > 0 && v[lo - 1] > half) --lo;
    hi = pk;
    while (hi + 1 < n && v[hi + 1] > half) ++hi;
  }
  const bool clipped = lo == 0 || hi == n - 1;

  // interpolated crossing between the edge bin k (above half) and its
  // outward neighbor j (at or below half)
  const auto cross = [&](int k, int j, double& where, double& band) {
    const double slope = (v[k] - v[j]) / (spec.omega[k] - spec.omega[j]);
    where = spec.omega[j] + (half - v[j]) / slope;
    band = se.empty() || slope == 0 ? 0.0 : 0.5 * (se[j] + se[k]) / std::abs(slope);
  };

  LinewidthResult r;
  r.peakFrequency = spec.omega[pk];
  r.method = WidthMethod::HalfMaxInterpolation;
  double left = spec.omega[std::max(0, lo)];
  double right = spec.omega[std::min(n - 1, hi)];
  double bandL = 0, bandR = 0;
  if (lo > 0) cross(lo, lo - 1, left, bandL);
  if (hi < n - 1) cross(hi, hi + 1, right, bandR);
  r.fwhm = right - left;
  r.uncertainty = spec.resolution + bandL + bandR;
  r.resolved = !clipped && r.fwhm >= 5.0 * spec.resolution;
  return r;
}

namespace {

void fillRow(SweepRow& row, const SystemParams& p, const SimConfig& base, std::uint64_t rowSeed,
             bool above) {
  SimConfig c = base;
  c.masterSeed = rowSeed;
  if (c.initialState != InitialState::Custom)
    c.initialState = above ? InitialState::AtNonzero : InitialState::AtZero;
  const Window win = above ? Window::Hann : Window::Rectangular;

  int segLen = rowSegmentLength(c);
  const long long baseSamples = (base.steps - base.transientSteps) / base.sampleStride;
  const long long segsPerTraj = std::max(1LL, baseSamples / segLen);

  RowSpectrum rs;
  for (int attempt = 0;; ++attempt) {
    rs = runRow(p, c, segLen, win);
    const auto peaks = findPeaks(rs.spec, SpecMode::A2, defaultMinProminence());
    row.peakCountA2 = static_cast<int>(peaks.size());
    for (int mo = 0; mo < 3; ++mo) {
      row.width[mo].reset();
      try {
        row.width[mo] = structureWidth(rs.spec, static_cast<SpecMode>(mo), above);
      } catch (const Error&) {
        // a powerless spectrum has no width; leave the slot empty
      }
    }
    row.doubletSeparation.reset();
    if (!above && peaks.size() == 2)
      row.doubletSeparation = peaks[1].frequency - peaks[0].frequency;

    const bool tracked = row.width[1] && row.width[1]->resolved &&
                         (!above || (row.width[2] && row.width[2]->resolved));
    if (tracked || attempt >= 3) break;
    // the tracked line sits too close to the grid floor: trade segment
    // density for resolution and integrate longer, holding segment count
    segLen *= 2;
    c.steps = c.transientSteps + segsPerTraj * segLen * c.sampleStride;
  }

  for (int mo = 0; mo < 3; ++mo) row.intensity[mo] = rs.intensity[mo];
}

SweepTable sweepCommon(SweepKind kind, const SystemParams& p,
                       const std::vector<double>& grid, const SimConfig& base) {
  if (grid.empty()) throw validationError("empty sweep grid");
  SweepTable table;
  table.kind = kind;
  table.fixedParams = p;
  table.baseConfig = base;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow row;
    row.sweptValue = grid[i];
    const std::uint64_t rowSeed = base.masterSeed + 1000003ull * (i + 1);
    try {
      SystemParams rp = p;
      if (kind == SweepKind::Drive)
        rp.drive = grid[i];
      else
        rp.nbar = grid[i];
      const double th = thresholdAmplitude(rp);
      const bool above = rp.drive > th;
      fillRow(row, rp, base, rowSeed, above);
    } catch (const std::exception& ex) {
      row.ok = false;
      row.error = ex.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

SweepTable sweepDrive(const SystemParams& p_, const std::vector<double>& driveGrid,
                      const SimConfig& base) {
  const auto p = validated(p_);
  return sweepCommon(SweepKind::Drive, p, driveGrid, base);
}

SweepTable sweepNbar(const SystemParams& p_, const std::vector<double>& nbarGrid,
                     const SimConfig& base) {
  const auto p = validated(p_);
  if (p.drive <= thresholdAmplitude(p))
    throw validationError("occupation sweep needs an above-threshold drive");
  auto table = sweepCommon(SweepKind::Nbar, p, nbarGrid, base);

  std::vector<double> xs, ys;
  for (const auto& row : table.rows)
    if (row.ok && row.width[1] && row.width[1]->resolved) {
      xs.push_back(row.sweptValue);
      ys.push_back(row.width[1]->fwhm);
    }
  if (xs.size() >= 3) {
    try {
      table.exponentFit = powerlawFit(xs, ys);
    } catch (const Error&) {
      // degenerate widths; leave the fit empty
    }
  }
  return table;
}

}  // namespace phl
