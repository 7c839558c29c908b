#include "fwsindy/sparse_regression.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fwsindy {

namespace {

void check_config(const SolverConfig& cfg) {
  if (!(cfg.threshold > 0.0))
    throw std::invalid_argument("st_ridge: threshold must be > 0");
  if (cfg.ridge < 0.0)
    throw std::invalid_argument("st_ridge: ridge must be >= 0");
  if (cfg.max_iters < 1)
    throw std::invalid_argument("st_ridge: max_iters must be >= 1");
}

// Least squares on the named columns. Ridge goes through the augmented
// system [A; sqrt(lambda) I]; lambda = 0 falls back to the minimum-norm
// solution of a possibly rank-deficient system. Orthogonal factorization
// throughout, never normal equations.
Eigen::VectorXd solve_active(const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& y,
                             const std::vector<int>& active, double ridge) {
  const int p = static_cast<int>(A.rows());
  const int a = static_cast<int>(active.size());
  if (ridge > 0.0) {
    Eigen::MatrixXd B(p + a, a);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + a);
    for (int c = 0; c < a; ++c) B.col(c).head(p) = A.col(active[c]);
    B.bottomRows(a) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(a, a);
    rhs.head(p) = y;
    return B.completeOrthogonalDecomposition().solve(rhs);
  }
  Eigen::MatrixXd B(p, a);
  for (int c = 0; c < a; ++c) B.col(c) = A.col(active[c]);
  return B.completeOrthogonalDecomposition().solve(y);
}

}  // namespace

StRidgeResult st_ridge(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                       const SolverConfig& cfg) {
  check_config(cfg);
  const int p = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  if (p < 1 || m < 1) throw std::invalid_argument("st_ridge: empty system");
  if (A.rows() != y.size())
    throw std::invalid_argument("st_ridge: shape mismatch");
  if (!A.allFinite() || !y.allFinite())
    throw std::invalid_argument("st_ridge: non-finite input");

  Eigen::VectorXd col_norms(m);
  for (int j = 0; j < m; ++j) col_norms[j] = A.col(j).norm();

  Eigen::MatrixXd An;
  const Eigen::MatrixXd* design = &A;
  if (cfg.normalize_columns) {
    An = A;
    for (int j = 0; j < m; ++j)
      if (col_norms[j] > 0.0) An.col(j) /= col_norms[j];
    design = &An;
  }

  // All-zero columns are never selected.
  std::vector<int> active;
  for (int j = 0; j < m; ++j)
    if (col_norms[j] > 0.0) active.push_back(j);

  StRidgeResult result;
  result.coeffs = Eigen::VectorXd::Zero(m);
  if (active.empty()) return result;

  Eigen::VectorXd ws = solve_active(*design, y, active, cfg.ridge);
  result.iterations = 1;
  for (int it = 0; it < cfg.max_iters; ++it) {
    std::vector<int> keep;
    keep.reserve(active.size());
    for (size_t c = 0; c < active.size(); ++c)
      if (std::abs(ws[static_cast<int>(c)]) >= cfg.threshold)
        keep.push_back(active[c]);
    if (keep.size() == active.size()) break;  // stable active set
    active = std::move(keep);
    if (active.empty()) return result;
    ws = solve_active(*design, y, active, cfg.ridge);
    ++result.iterations;
  }

  if (cfg.debias && !active.empty()) {
    ws = solve_active(*design, y, active, 0.0);
    ++result.iterations;
  }

  for (size_t c = 0; c < active.size(); ++c) {
    double v = ws[static_cast<int>(c)];
    // Entries can sit below the threshold only when max_iters cut the
    // loop short (or after a debias refit); enforce the contract.
    if (!cfg.debias && std::abs(v) < cfg.threshold) continue;
    if (cfg.normalize_columns) v /= col_norms[active[c]];
    result.coeffs[active[c]] = v;
  }
  return result;
}

StRidgeMultiResult st_ridge_multi(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& Y,
                                  const SolverConfig& cfg) {
  if (A.rows() != Y.rows())
    throw std::invalid_argument("st_ridge_multi: shape mismatch");
  StRidgeMultiResult result;
  result.coeffs.resize(A.cols(), Y.cols());
  for (int i = 0; i < Y.cols(); ++i) {
    const StRidgeResult single = st_ridge(A, Y.col(i), cfg);
    result.coeffs.col(i) = single.coeffs;
    result.iterations = std::max(result.iterations, single.iterations);
  }
  return result;
}

}  // namespace fwsindy
