#pragma once

#include <Eigen/Dense>

namespace fwsindy {

struct SolverConfig {
  double threshold = 0.5;  // eta, coefficient magnitude cutoff, > 0
  double ridge = 0.001;    // lambda, >= 0
  int max_iters = 20;
  bool normalize_columns = false;
  bool debias = false;  // final unregularized refit on the stable active set
};

struct StRidgeResult {
  Eigen::VectorXd coeffs;
  int iterations = 0;  // linear solves performed
};

/// Sequentially thresholded ridge regression. Solves the ridge problem on the
/// active set via orthogonal factorization of the augmented system
/// [A; sqrt(lambda) I] (never normal equations), zeroes coefficients with
/// |w_j| < threshold, and repeats until the active set is stable or max_iters
/// is reached. Rank-deficient lambda = 0 solves fall back to the minimum-norm
/// solution; all-zero columns are never selected. With normalize_columns the
/// threshold applies to unit-norm-column coefficients and the result is
/// rescaled back.
StRidgeResult st_ridge(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                       const SolverConfig& cfg);

struct StRidgeMultiResult {
  Eigen::MatrixXd coeffs;  // m x n
  int iterations = 0;      // max over columns
};

/// Column-wise st_ridge: result column i depends only on Y column i.
StRidgeMultiResult st_ridge_multi(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& Y,
                                  const SolverConfig& cfg);

}  // namespace fwsindy
