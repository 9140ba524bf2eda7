#include "phl/stability.hpp"

#include <algorithm>
#include <cmath>

#include "pair_jacobian.hpp"

namespace phl {

double zeroModeTolerance(const SystemParams& p) {
  return 1e-8 * std::max({p.gamma1, p.gamma2, p.gammaB});
}

Linearization buildZeroJacobian(const SystemParams& p_, double deltaOmega) {
  const auto p = validated(p_);
  const SystemParams q = withPulledDetunings(p, deltaOmega);
  const cplx a1st = zeroState(p).amplitudes.a1;
  const cplx I(0.0, 1.0);

  Linearization lin;
  lin.matrix = Eigen::MatrixXcd::Zero(3, 3);
  lin.matrix(0, 0) = -q.gamma1;
  lin.matrix(1, 1) = -(q.gamma2 + I * q.dOmega2);
  lin.matrix(1, 2) = -I * q.g * a1st;
  lin.matrix(2, 1) = I * q.g * std::conj(a1st);
  lin.matrix(2, 2) = cplx(-q.gammaB, q.omegaB);
  lin.basisLabels = {"da1", "da2", "db*"};
  lin.frameFrequency = deltaOmega;
  return lin;
}

std::array<cplx, 3> eigenvaluesClosedForm(const SystemParams& p_, double deltaOmega) {
  const auto p = validated(p_);
  const SystemParams q = withPulledDetunings(p, deltaOmega);
  const cplx I(0.0, 1.0);
  const cplx center = -0.5 * cplx(q.gamma2 + q.gammaB, q.dOmega2 - q.omegaB);
  const cplx w = cplx(q.gamma2 - q.gammaB, q.dOmega2 + q.omegaB);
  const double drivePole = p.g * p.drive / p.gamma1;
  const cplx root = std::sqrt(w * w + 4.0 * drivePole * drivePole);
  return {cplx(-p.gamma1, 0.0), center + 0.5 * root, center - 0.5 * root};
}

Linearization buildNonzeroJacobian(const SystemParams& p_) {
  const auto p = validated(p_);
  const auto st = nonzeroState(p);  // throws "below threshold" when absent
  const SystemParams q = withPulledDetunings(p, st.deltaOmega);

  Linearization lin;
  lin.matrix = detail::pairJacobian(q, st.amplitudes);
  lin.basisLabels = {"da1", "da1*", "da2", "da2*", "db", "db*"};
  lin.frameFrequency = st.deltaOmega;
  return lin;
}

StabilityReport eigenSolve(const Linearization& lin) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(lin.matrix, /*computeEigenvectors=*/false);

  StabilityReport rep;
  const auto& ev = es.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());

  // decay rates sit on the diagonal in both bases, so the zero-mode cutoff
  // can be recovered from the matrix itself
  double maxGamma = 0.0;
  for (int i = 0; i < lin.matrix.rows(); ++i)
    maxGamma = std::max(maxGamma, std::abs(lin.matrix(i, i).real()));
  const double tol = 1e-8 * maxGamma;

  rep.maxRealPart = -std::numeric_limits<double>::infinity();
  rep.zeroModes = 0;
  bool allDecaying = true;
  for (const auto& l : rep.eigenvalues) {
    rep.maxRealPart = std::max(rep.maxRealPart, l.real());
    if (std::abs(l.real()) < tol)
      ++rep.zeroModes;
    else if (l.real() > 0)
      allDecaying = false;
  }
  rep.stable = allDecaying;
  return rep;
}

double thresholdBisect(const SystemParams& p_) {
  const auto p = validated(p_);
  const double dw = phononFrequencyPulling(p);
  const auto maxRe = [&](double drive) {
    SystemParams q = p;
    q.drive = drive;
    const auto lam = eigenvaluesClosedForm(q, dw);
    return std::max(lam[1].real(), lam[2].real());
  };

  double lo = 0.0;
  double hi = 10.0 * thresholdAmplitude(p);
  if (maxRe(lo) >= 0 || maxRe(hi) <= 0)
    throw numericalError("threshold bisection bracket does not straddle a sign change");
  while (hi - lo > 1e-8 * hi) {
    const double mid = 0.5 * (lo + hi);
    (maxRe(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXcd goldstoneMode(const SystemParams& p_) {
  const auto p = validated(p_);
  const auto st = nonzeroState(p);  // throws "below threshold" when absent
  const cplx I(0.0, 1.0);

  // tangent of the phase orbit (a2 e^{i phi}, b e^{-i phi}) at phi = 0
  Eigen::VectorXcd v(6);
  v << 0.0, 0.0, I * st.amplitudes.a2, -I * std::conj(st.amplitudes.a2),
      -I * st.amplitudes.b, I * std::conj(st.amplitudes.b);
  v.normalize();
  const cplx pivot = v[2];
  if (std::abs(pivot) > 0) v *= std::conj(pivot) / std::abs(pivot);
  return v;
}

}  // namespace phl
