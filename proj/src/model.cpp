#include "phl/model.hpp"

#include <cmath>
#include <sstream>

#include "pair_jacobian.hpp"

namespace phl {

namespace {

void checkFinite(double v, const char* name) {
  if (!std::isfinite(v)) throw validationError(std::string(name) + " must be finite");
}

}  // namespace

SystemParams validated(const SystemParams& raw) {
  checkFinite(raw.gamma1, "gamma1");
  checkFinite(raw.gamma2, "gamma2");
  checkFinite(raw.gammaB, "gammaB");
  checkFinite(raw.dOmega2, "dOmega2");
  checkFinite(raw.omegaB, "omegaB");
  checkFinite(raw.g, "g");
  checkFinite(raw.drive, "drive");
  checkFinite(raw.nbar, "nbar");
  if (raw.gamma1 <= 0) throw validationError("gamma1 must be positive");
  if (raw.gamma2 <= 0) throw validationError("gamma2 must be positive");
  if (raw.gammaB <= 0) throw validationError("gammaB must be positive");
  if (raw.omegaB <= 0) throw validationError("omegaB must be positive");
  if (raw.g <= 0) throw validationError("g must be positive");
  if (raw.drive < 0) throw validationError("drive must be nonnegative");
  if (raw.nbar < 0) throw validationError("nbar must be nonnegative");
  return raw;
}

double thresholdAmplitude(const SystemParams& p_) {
  const auto p = validated(p_);
  const double r = (p.dOmega2 + p.omegaB) / (p.gamma2 + p.gammaB);
  return p.gamma1 * p.gamma2 / p.g * std::sqrt(p.gammaB / p.gamma2) * std::sqrt(1.0 + r * r);
}

double existenceAmplitude(const SystemParams& p_) {
  const auto p = validated(p_);
  const double r = std::abs(p.dOmega2 + p.omegaB) / (p.gamma2 + p.gammaB);
  return p.gamma1 * p.gamma2 / p.g * std::sqrt(p.gammaB / p.gamma2) * r;
}

double phononFrequencyPulling(const SystemParams& p_) {
  const auto p = validated(p_);
  return (p.gamma2 * p.omegaB - p.gammaB * p.dOmega2) / (p.gamma2 + p.gammaB);
}

StationaryState zeroState(const SystemParams& p_) {
  const auto p = validated(p_);
  StationaryState st;
  st.kind = StateKind::Zero;
  st.amplitudes.a1 = cplx(0.0, -p.drive / p.gamma1);
  st.amplitudes.a2 = 0.0;
  st.amplitudes.b = 0.0;
  st.deltaOmega = phononFrequencyPulling(p);
  return st;
}

ModeState drift(const ModeState& s, const SystemParams& p) {
  const cplx I(0.0, 1.0);
  ModeState d;
  d.a1 = -p.gamma1 * s.a1 - I * p.g * s.a2 * s.b - I * p.drive;
  d.a2 = -(p.gamma2 + I * p.dOmega2) * s.a2 - I * p.g * s.a1 * std::conj(s.b);
  d.b = -(p.gammaB + I * p.omegaB) * s.b - I * p.g * s.a1 * std::conj(s.a2);
  return d;
}

SystemParams withPulledDetunings(const SystemParams& p, double deltaOmega) {
  SystemParams q = p;
  q.dOmega2 = p.dOmega2 + deltaOmega;
  q.omegaB = p.omegaB - deltaOmega;
  return q;
}

StationaryState nonzeroState(const SystemParams& p_) {
  const auto p = validated(p_);
  const double th = thresholdAmplitude(p);
  if (p.drive <= th) {
    std::ostringstream os;
    os << "below threshold: drive " << p.drive << " does not exceed " << th;
    throw validationError(os.str());
  }

  const double dw = phononFrequencyPulling(p);
  const double Db = p.omegaB - dw;
  const double exi = existenceAmplitude(p);
  // drive > threshold >= existence edge, so both radicands are positive
  const double X = std::sqrt(p.gammaB / p.gamma2) *
                       std::sqrt(p.drive * p.drive - exi * exi) / p.g -
                   p.gamma1 * p.gammaB / (p.g * p.g);
  const double pa = std::sqrt(X);

  const cplx I(0.0, 1.0);
  const cplx gbDb = cplx(p.gammaB, Db);
  const cplx Z = p.g * pa + p.gamma1 * gbDb / (p.g * pa);
  const cplx B = -p.drive / Z;
  const cplx A1 = I * gbDb * B / (p.g * pa);

  ModeState s{A1, cplx(pa, 0.0), B};

  // Newton refinement in the co-rotating frame where the family is a true
  // fixed point. The phase direction is neutral, so the Jacobian is singular
  // by construction; minimum-norm least-squares steps stay on the manifold.
  const SystemParams q = withPulledDetunings(p, dw);
  const double scale = std::max(1.0, std::sqrt(std::norm(s.a1) + std::norm(s.a2) + std::norm(s.b)));
  for (int iter = 0; iter < 40; ++iter) {
    const Eigen::VectorXd f = detail::realifiedDrift(s, q);
    if (f.norm() < 1e-15 * scale) break;
    const Eigen::MatrixXd J = detail::realified(detail::pairJacobian(q, s));
    const Eigen::VectorXd dx = J.completeOrthogonalDecomposition().solve((-f).eval());
    s.a1 += cplx(dx[0], dx[1]);
    s.a2 += cplx(dx[2], dx[3]);
    s.b += cplx(dx[4], dx[5]);
    if (dx.norm() < 1e-17 * scale) break;
  }

  // representative of the phase family: a2 real positive
  if (std::abs(s.a2) > 0) {
    const cplx rot = std::conj(s.a2) / std::abs(s.a2);
    s.a2 *= rot;
    s.b *= std::conj(rot);
  }
  s.a2 = cplx(s.a2.real(), 0.0);

  StationaryState st;
  st.kind = StateKind::Nonzero;
  st.amplitudes = s;
  st.deltaOmega = dw;
  return st;
}

namespace detail {

Eigen::MatrixXcd pairJacobian(const SystemParams& frame, const ModeState& s) {
  const cplx I(0.0, 1.0);
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(6, 6);
  // plain rows: the unconjugated equations of motion
  J(0, 0) = -frame.gamma1;
  J(0, 2) = -I * frame.g * s.b;
  J(0, 4) = -I * frame.g * s.a2;

  J(2, 2) = -(frame.gamma2 + I * frame.dOmega2);
  J(2, 0) = -I * frame.g * std::conj(s.b);
  J(2, 5) = -I * frame.g * s.a1;

  J(4, 4) = -(frame.gammaB + I * frame.omegaB);
  J(4, 0) = -I * frame.g * std::conj(s.a2);
  J(4, 3) = -I * frame.g * s.a1;

  static const int pair[6] = {1, 0, 3, 2, 5, 4};
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 6; ++k) J(2 * m + 1, pair[k]) = std::conj(J(2 * m, k));
  return J;
}

Eigen::MatrixXd realified(const Eigen::MatrixXcd& J) {
  Eigen::MatrixXd R(6, 6);
  const cplx I(0.0, 1.0);
  for (int m = 0; m < 3; ++m) {
    for (int k = 0; k < 3; ++k) {
      const cplx jz = J(2 * m, 2 * k);
      const cplx jzc = J(2 * m, 2 * k + 1);
      const cplx dRe = jz + jzc;
      const cplx dIm = I * (jz - jzc);
      R(2 * m, 2 * k) = dRe.real();
      R(2 * m + 1, 2 * k) = dRe.imag();
      R(2 * m, 2 * k + 1) = dIm.real();
      R(2 * m + 1, 2 * k + 1) = dIm.imag();
    }
  }
  return R;
}

Eigen::VectorXd realifiedDrift(const ModeState& s, const SystemParams& frame) {
  const ModeState d = drift(s, frame);
  Eigen::VectorXd f(6);
  f << d.a1.real(), d.a1.imag(), d.a2.real(), d.a2.imag(), d.b.real(), d.b.imag();
  return f;
}

}  // namespace detail

}  // namespace phl
