#pragma once

#include <Eigen/Dense>

#include "fwsindy/dictionary.hpp"
#include "fwsindy/ode_bench.hpp"

namespace fwsindy {

/// Relative coefficient error ||West - W||_F / ||W||_F.
double coeff_error(const CoefficientMatrix& estimated,
                   const CoefficientMatrix& truth);

/// TP / (TP + FP + FN) over exactly-nonzero supports; 1 when both matrices
/// are identically zero.
double true_positive_ratio(const CoefficientMatrix& estimated,
                           const CoefficientMatrix& truth);

struct TrajectoryErrorResult {
  double eps2 = 0.0;   // ||Xhat - Xtrue||_F / ||Xtrue||_F, +inf when unstable
  bool stable = true;  // false when the learned model diverges
};

/// Simulates the learned polynomial model from x0 on the same grid and
/// integrator as the true system. Divergence is a reported outcome, not a
/// failure.
TrajectoryErrorResult trajectory_error(const CoefficientMatrix& learned,
                                       const OdeSystem& sys,
                                       const Eigen::VectorXd& x0, double T,
                                       double fs);

}  // namespace fwsindy
