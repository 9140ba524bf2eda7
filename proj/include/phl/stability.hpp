#pragma once
#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "phl/model.hpp"

namespace phl {

struct Linearization {
  Eigen::MatrixXcd matrix;  // 3x3 about the zero state, 6x6 about the nonzero state
  std::vector<std::string> basisLabels;
  double frameFrequency;  // the deltaOmega the co-rotating frame uses
};

struct StabilityReport {
  std::vector<cplx> eigenvalues;
  double maxRealPart;
  int zeroModes;  // |Re| below 1e-8 * max(gamma)
  bool stable;    // maxRealPart < 0 after excluding declared zero modes
};

// 3x3 matrix over (da1, da2, db*). The third row is the conjugated phonon row,
// hence the +i(omegaB - deltaOmega) diagonal sign.
Linearization buildZeroJacobian(const SystemParams& p, double deltaOmega);

// lambda1 = -gamma1; lambda23 from the closed-form square root. Re lambda23 is
// independent of deltaOmega.
std::array<cplx, 3> eigenvaluesClosedForm(const SystemParams& p, double deltaOmega);

// 6x6 over (da1, da1*, da2, da2*, db, db*) at nonzeroState, co-rotating frame.
// Conjugate rows are generated from the plain rows, never written out by hand.
Linearization buildNonzeroJacobian(const SystemParams& p);

StabilityReport eigenSolve(const Linearization& lin);

// Bisection of max Re eigenvalue of the zero-state linearization over drive.
double thresholdBisect(const SystemParams& p);

// Unit-norm eigenvector of the 6x6 zero eigenvalue, da2 component real positive.
Eigen::VectorXcd goldstoneMode(const SystemParams& p);

double zeroModeTolerance(const SystemParams& p);

}  // namespace phl
