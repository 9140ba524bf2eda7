#pragma once
#include <Eigen/Dense>

#include "phl/model.hpp"

// Internal helpers shared between the stationary-state solver and the
// stability module. Not installed, not part of the public surface.
namespace phl::detail {

// 6x6 complex-pair Jacobian of drift() at state s, basis
// (da1, da1*, da2, da2*, db, db*). frame carries the detunings of the frame
// the derivative is taken in. Conjugate rows are generated from the plain
// rows; the pairing permutation is (1,0,3,2,5,4).
Eigen::MatrixXcd pairJacobian(const SystemParams& frame, const ModeState& s);

// Same derivative over the real coordinates
// (Re a1, Im a1, Re a2, Im a2, Re b, Im b).
Eigen::MatrixXd realified(const Eigen::MatrixXcd& J);

// drift() stacked as the matching real 6-vector
Eigen::VectorXd realifiedDrift(const ModeState& s, const SystemParams& frame);

}  // namespace phl::detail
