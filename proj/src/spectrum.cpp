#include "phl/spectrum.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "phl/stability.hpp"

namespace phl {

namespace {

// signed FFT index: bins 0..N-1 cover frequencies 0..+half, then -half..-1
long long signedBin(long long m, long long n) { return m <= (n - 1) / 2 ? m : m - n; }

// sorted position of bin m on the ascending frequency axis
long long sortedPos(long long m, long long n) { return (n - 1 - n / 2) - signedBin(m, n); }

std::vector<double> windowCoefficients(int n, Window w) {
  std::vector<double> c(n, 1.0);
  if (w == Window::Hann)
    for (int i = 0; i < n; ++i) c[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));
  return c;
}

// crude full-width at half maximum in bins, for the resolution advisory only
double crudeWidthBins(const std::vector<double>& v) {
  int imax = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[imax]) imax = i;
  const double half = 0.5 * v[imax];
  double left = 0, right = 0;
  for (int j = imax - 1; j >= 0; --j) {
    if (v[j] <= half) {
      left = (imax - j) - (half - v[j]) / (v[j + 1] - v[j]);
      break;
    }
    if (j == 0) left = imax;
  }
  for (int j = imax + 1; j < static_cast<int>(v.size()); ++j) {
    if (v[j] <= half) {
      right = (j - imax) - (half - v[j]) / (v[j - 1] - v[j]);
      break;
    }
    if (j + 1 == static_cast<int>(v.size())) right = v.size() - 1 - imax;
  }
  return left + right;
}

}  // namespace

std::vector<double> defaultOmegaGrid(int segmentLength, double sampleDt) {
  if (segmentLength < 2) throw validationError("segment length must be at least 2 samples");
  if (!(sampleDt > 0)) throw validationError("sample spacing must be positive");
  const long long n = segmentLength;
  const double dnu = 2.0 * M_PI / (n * sampleDt);
  std::vector<double> grid(n);
  const long long anchor = n - 1 - n / 2;  // position of the zero bin
  for (long long k = 0; k < n; ++k) grid[k] = static_cast<double>(k - anchor) * dnu;
  return grid;
}

SpectrumData welchSpectrum(const TrajectoryEnsemble& e, int segmentLength, Window window) {
  if (segmentLength < 2) throw validationError("segment length must be at least 2 samples");
  const double sampleDt = e.config.dt * e.config.sampleStride;

  long long totalSegments = 0;
  for (const auto& traj : e.samples)
    totalSegments += static_cast<long long>(traj.size()) / segmentLength;
  if (totalSegments < 8) {
    std::ostringstream os;
    os << "insufficient segments: " << totalSegments << " of length " << segmentLength
       << ", need at least 8";
    throw validationError(os.str());
  }

  const long long n = segmentLength;
  const auto w = windowCoefficients(segmentLength, window);
  double wSq = 0.0;
  for (double c : w) wSq += c * c;
  wSq /= n;
  if (wSq <= 0) throw validationError("window has zero power");
  const double norm = sampleDt / (2.0 * M_PI * n * wSq);

  SpectrumData out;
  out.source = SpectrumSource::Simulated;
  out.omega = defaultOmegaGrid(segmentLength, sampleDt);
  out.resolution = 2.0 * M_PI / (n * sampleDt);
  std::vector<double>* mean[3] = {&out.sA1, &out.sA2, &out.sB};
  std::vector<double>* se[3] = {&out.stderrA1, &out.stderrA2, &out.stderrB};
  std::vector<std::vector<double>> m2(3, std::vector<double>(n, 0.0));
  for (int mo = 0; mo < 3; ++mo) {
    mean[mo]->assign(n, 0.0);
    se[mo]->assign(n, 0.0);
  }

  fftw_complex* buf = fftw_alloc_complex(n);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);

  // fixed reduction order: trajectories ascending, segments ascending
  long long seg = 0;
  for (const auto& traj : e.samples) {
    const long long nSeg = static_cast<long long>(traj.size()) / n;
    for (long long s = 0; s < nSeg; ++s, ++seg) {
      for (int mo = 0; mo < 3; ++mo) {
        for (long long i = 0; i < n; ++i) {
          const ModeState& st = traj[s * n + i];
          const cplx z = mo == 0 ? st.a1 : mo == 1 ? st.a2 : st.b;
          buf[i][0] = z.real() * w[i];
          buf[i][1] = z.imag() * w[i];
        }
        fftw_execute(plan);
        for (long long m = 0; m < n; ++m) {
          const double p = (buf[m][0] * buf[m][0] + buf[m][1] * buf[m][1]) * norm;
          const long long k = sortedPos(m, n);
          const double d = p - (*mean[mo])[k];
          (*mean[mo])[k] += d / (seg + 1);
          m2[mo][k] += d * (p - (*mean[mo])[k]);
        }
      }
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);

  for (int mo = 0; mo < 3; ++mo)
    for (long long k = 0; k < n; ++k)
      (*se[mo])[k] = std::sqrt(m2[mo][k] / (totalSegments - 1) / totalSegments);

  static const char* names[3] = {"sA1", "sA2", "sB"};
  for (int mo = 0; mo < 3; ++mo) {
    double top = 0.0;
    for (double v : *mean[mo]) top = std::max(top, v);
    if (top <= 0) continue;
    if (crudeWidthBins(*mean[mo]) < 5.0)
      out.advisories.push_back(std::string("unresolved line: ") + names[mo]);
  }
  return out;
}

SpectrumData analyticSpectrum(const SystemParams& p_, double deltaOmega,
                              const std::vector<double>& omegaGrid) {
  const auto p = validated(p_);
  if (!std::isfinite(deltaOmega)) throw validationError("deltaOmega must be finite");
  if (omegaGrid.empty()) throw validationError("empty frequency grid");

  const auto lin = buildZeroJacobian(p, deltaOmega);
  const auto rep = eigenSolve(lin);
  if (rep.maxRealPart >= 0) {
    std::ostringstream os;
    os << "unstable linearization: max Re eigenvalue " << rep.maxRealPart
       << "; the fluctuation spectrum about the zero state is undefined";
    throw numericalError(os.str());
  }

  SpectrumData out;
  out.source = SpectrumSource::Analytic;
  out.omega = omegaGrid;
  out.resolution = omegaGrid.size() > 1 ? omegaGrid[1] - omegaGrid[0] : 0.0;
  const std::size_t n = omegaGrid.size();
  out.sA1.assign(n, 0.0);
  out.sA2.assign(n, 0.0);
  out.sB.assign(n, 0.0);

  const double pref = p.gammaB * p.nbar / M_PI;
  if (pref <= 0) return out;

  const Eigen::Matrix3cd Mc = lin.matrix.conjugate();
  const Eigen::Vector3cd e3 = Eigen::Vector3cd::Unit(2);
  const cplx I(0.0, 1.0);
  // third resolvent column at argument w: phonon diffusion is the only source
  const auto column = [&](double w) -> Eigen::Vector3cd {
    Eigen::Matrix3cd A = Mc;
    A.diagonal().array() += I * w;
    return A.partialPivLu().solve(e3);
  };

  bool singular = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double nu = omegaGrid[k];
    // the three components live in differently rotated frames, so each maps
    // its own resolvent argument onto the shared reported axis
    const double s1 = pref * std::norm(column(-nu)[0]);
    const double s2 = pref * std::norm(column(-nu - deltaOmega)[1]);
    const double s3 = pref * std::norm(column(nu - deltaOmega)[2]);
    out.sA1[k] = std::isfinite(s1) ? s1 : 0.0;
    out.sA2[k] = std::isfinite(s2) ? s2 : 0.0;
    out.sB[k] = std::isfinite(s3) ? s3 : 0.0;
    if (!std::isfinite(s1) || !std::isfinite(s2) || !std::isfinite(s3)) singular = true;
  }
  if (singular) out.advisories.push_back("singular bin: value replaced by zero");
  return out;
}

}  // namespace phl
