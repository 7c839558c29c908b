#include "fwsindy/metrics.hpp"

#include <limits>
#include <stdexcept>

namespace fwsindy {

namespace {

void check_specs(const CoefficientMatrix& a, const CoefficientMatrix& b) {
  if (!(a.spec == b.spec))
    throw std::invalid_argument("metrics: dictionary specs differ");
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw std::invalid_argument("metrics: coefficient shapes differ");
}

}  // namespace

double coeff_error(const CoefficientMatrix& estimated,
                   const CoefficientMatrix& truth) {
  check_specs(estimated, truth);
  const double denom = truth.values.norm();
  if (denom == 0.0)
    throw std::invalid_argument("coeff_error: zero true coefficient matrix");
  return (estimated.values - truth.values).norm() / denom;
}

double true_positive_ratio(const CoefficientMatrix& estimated,
                           const CoefficientMatrix& truth) {
  check_specs(estimated, truth);
  // Support is exactly-nonzero: thresholded solvers emit exact zeros.
  long tp = 0, fp = 0, fn = 0;
  for (int r = 0; r < truth.values.rows(); ++r) {
    for (int c = 0; c < truth.values.cols(); ++c) {
      const bool est = estimated.values(r, c) != 0.0;
      const bool tru = truth.values(r, c) != 0.0;
      tp += est && tru;
      fp += est && !tru;
      fn += !est && tru;
    }
  }
  if (tp + fp + fn == 0) return 1.0;  // both identically zero
  return static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
}

TrajectoryErrorResult trajectory_error(const CoefficientMatrix& learned,
                                       const OdeSystem& sys,
                                       const Eigen::VectorXd& x0, double T,
                                       double fs) {
  if (learned.spec.dim != sys.dim())
    throw std::invalid_argument("trajectory_error: dimension mismatch");
  const Trajectory truth = simulate(sys, x0, T, fs);

  auto model_rhs = [&learned](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return (evaluate_row(learned.spec, x) * learned.values).transpose();
  };

  TrajectoryErrorResult result;
  try {
    const Trajectory predicted = simulate_rhs(model_rhs, sys.dim(), x0, T, fs);
    result.eps2 = (predicted.states - truth.states).norm() / truth.states.norm();
    result.stable = true;
  } catch (const SimulationDiverged&) {
    result.eps2 = std::numeric_limits<double>::infinity();
    result.stable = false;
  }
  return result;
}

}  // namespace fwsindy
