#include "fwsindy/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fft.hpp"

namespace fwsindy {

namespace {
constexpr double kPi = std::numbers::pi;

// Second-order finite differences: centered inside, one-sided 3-point at the
// boundaries.
Eigen::MatrixXd finite_difference(const Eigen::MatrixXd& Y, double dt) {
  const int k = static_cast<int>(Y.rows());
  Eigen::MatrixXd D(k, Y.cols());
  D.row(0) = (-3.0 * Y.row(0) + 4.0 * Y.row(1) - Y.row(2)) / (2.0 * dt);
  for (int i = 1; i < k - 1; ++i)
    D.row(i) = (Y.row(i + 1) - Y.row(i - 1)) / (2.0 * dt);
  D.row(k - 1) =
      (3.0 * Y.row(k - 1) - 4.0 * Y.row(k - 2) + Y.row(k - 3)) / (2.0 * dt);
  return D;
}

}  // namespace

double bump_value(double t_bar, int q) {
  if (std::abs(t_bar) > 1.0) return 0.0;
  return std::pow(1.0 - t_bar * t_bar, q);
}

double bump_derivative(double t_bar, int q, double half_width) {
  if (std::abs(t_bar) > 1.0) return 0.0;
  return -2.0 * q * t_bar * std::pow(1.0 - t_bar * t_bar, q - 1) / half_width;
}

LearnerResult sindy_classic(const Trajectory& data, const DictionarySpec& spec,
                            const SolverConfig& cfg) {
  data.validate();
  if (data.samples() < 5)
    throw std::invalid_argument("sindy_classic: need >= 5 samples");
  const DictionaryMatrix theta = evaluate(spec, data);
  const Eigen::MatrixXd xdot = finite_difference(data.states, data.dt);

  const StRidgeMultiResult solved = st_ridge_multi(theta.values, xdot, cfg);
  LearnerResult result;
  result.coeffs = CoefficientMatrix{solved.coeffs, spec};
  result.method = "sindy";
  result.iterations = solved.iterations;
  result.residual_norm = (theta.values * solved.coeffs - xdot).norm();
  return result;
}

LearnerResult wsindy_bump(const Trajectory& data, const DictionarySpec& spec,
                          const BumpTestFunctionSpec& tf,
                          const SolverConfig& cfg) {
  data.validate();
  if (tf.subdomains < 1)
    throw std::invalid_argument("wsindy_bump: need >= 1 subdomain");
  if (tf.exponent < 1)
    throw std::invalid_argument("wsindy_bump: exponent must be >= 1");

  const int k = data.samples();
  const int p = tf.subdomains;
  const int q = tf.exponent;
  // Subdomains tile one sample period; the j-th covers
  // [j*width, (j+1)*width] relative to t0.
  const double width = k * data.dt / p;
  const double half = width / 2.0;

  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(p, k);
  Eigen::MatrixXd dphi = Eigen::MatrixXd::Zero(p, k);
  for (int j = 0; j < p; ++j) {
    const double start = j * width;
    const double end = (j + 1) * width;
    // Grid nodes inside the closed subdomain, counting the zero-weight
    // endpoints (the period boundary t = k*dt is a valid node even though
    // the last sample sits one dt before it).
    const int first = static_cast<int>(std::ceil(start / data.dt - 1e-9));
    const int last = static_cast<int>(std::floor(end / data.dt + 1e-9));
    if (last - first + 1 < 2 * q + 3)
      throw std::invalid_argument(
          "wsindy_bump: subdomain too narrow for the sample rate");

    const double center = (j + 0.5) * width;
    for (int i = std::max(first, 0); i < std::min(last + 1, k); ++i) {
      const double t_bar = (i * data.dt - center) / half;
      if (std::abs(t_bar) >= 1.0) continue;
      phi(j, i) = bump_value(t_bar, q);
      dphi(j, i) = bump_derivative(t_bar, q, half);
    }
  }

  // Trapezoid quadrature weights; bump support rarely reaches the grid ends,
  // where the half weights live.
  Eigen::VectorXd wq = Eigen::VectorXd::Constant(k, data.dt);
  wq[0] *= 0.5;
  wq[k - 1] *= 0.5;
  const Eigen::MatrixXd phi_w = phi * wq.asDiagonal();
  const Eigen::MatrixXd dphi_w = dphi * wq.asDiagonal();

  const DictionaryMatrix theta = evaluate(spec, data);
  const Eigen::MatrixXd G = phi_w * theta.values;     // p x m
  const Eigen::MatrixXd b = -(dphi_w * data.states);  // p x n

  const StRidgeMultiResult solved = st_ridge_multi(G, b, cfg);
  LearnerResult result;
  result.coeffs = CoefficientMatrix{solved.coeffs, spec};
  result.method = "wsindy_bump";
  result.iterations = solved.iterations;
  result.residual_norm = (G * solved.coeffs - b).norm();
  return result;
}

namespace {

// Sine coefficients b_l of every dictionary column, rows indexed by l.
Eigen::MatrixXd dictionary_sine_coeffs(const Eigen::MatrixXd& theta, int L) {
  const int k = static_cast<int>(theta.rows());
  const int m = static_cast<int>(theta.cols());
  Eigen::MatrixXd B(L + 1, m);
  for (int j = 0; j < m; ++j) {
    const auto F = detail::rfft(theta.col(j));
    B(0, j) = 0.0;
    for (int l = 1; l <= L; ++l) B(l, j) = -2.0 / k * F[l].imag();
  }
  return B;
}

std::vector<int> top_k_periodogram(const Eigen::VectorXd& signal, int K) {
  const int k = static_cast<int>(signal.size());
  const Eigen::VectorXd centered = signal.array() - signal.mean();
  const auto F = detail::rfft(centered);
  const int max_index = k / 2 - 1;
  if (K < 1 || K > max_index)
    throw std::invalid_argument("oracle selection: K exceeds available bins");
  std::vector<int> order(max_index);
  for (int l = 1; l <= max_index; ++l) order[l - 1] = l;
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    const double pl = std::norm(F[lhs]), pr = std::norm(F[rhs]);
    if (pl != pr) return pl > pr;
    return lhs < rhs;
  });
  order.resize(K);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

FourierSystem assemble_fourier_system(const Trajectory& data,
                                      const DictionarySpec& spec,
                                      const std::vector<int>& indices,
                                      int component) {
  data.validate();
  if (component < 0 || component >= data.dim())
    throw std::invalid_argument("assemble_fourier_system: bad component");
  const DictionaryMatrix theta = evaluate(spec, data);
  const FourierCoeffs yc = fourier_coeffs(data.states.col(component), data.dt);
  const int L = yc.max_index();
  for (int l : indices)
    if (l < 1 || l > L)
      throw std::invalid_argument("assemble_fourier_system: index out of range");
  const Eigen::MatrixXd B = dictionary_sine_coeffs(theta.values, L);

  FourierSystem sys;
  const int K = static_cast<int>(indices.size());
  sys.design.resize(K, spec.size());
  sys.target.resize(K);
  for (int r = 0; r < K; ++r) {
    const int l = indices[r];
    sys.design.row(r) = B.row(l);
    sys.target[r] = -(2.0 * kPi * l / yc.period) * yc.a[l];
  }
  return sys;
}

LearnerResult wsindy_fourier(const Trajectory& data, const DictionarySpec& spec,
                             const FrequencyPlan& plan,
                             const SolverConfig& cfg) {
  data.validate();
  const int k = data.samples();
  const int n = data.dim();
  const int L = k / 2 - 1;
  const double T = k * data.dt;

  const DictionaryMatrix theta = evaluate(spec, data);
  const Eigen::MatrixXd B = dictionary_sine_coeffs(theta.values, L);

  // Resolve per-component frequency indices.
  std::vector<std::vector<int>> selected(n);
  std::string tag;
  if (const auto* sweep = std::get_if<SweepSelection>(&plan)) {
    if (sweep->l_max < 1 || sweep->l_max > L)
      throw std::invalid_argument("wsindy_fourier: sweep exceeds available bins");
    const FrequencySelection sel = sweep_selection(sweep->l_max);
    for (int i = 0; i < n; ++i) selected[i] = sel.indices;
    tag = "wsindy_fourier_sweep";
  } else if (const auto* sde = std::get_if<SdeSelection>(&plan)) {
    for (int i = 0; i < n; ++i) {
      const PsdEstimate psd =
          multitaper_psd(data.states.col(i), data.dt, sde->nw);
      selected[i] = select_frequencies(psd, sde->top_k).indices;
    }
    tag = "wsindy_fourier_sde";
  } else {
    const auto& oracle = std::get<OracleSelection>(plan);
    if (!oracle.clean)
      throw std::invalid_argument("wsindy_fourier: oracle needs a clean trajectory");
    if (oracle.clean->samples() != k || oracle.clean->dim() != n)
      throw std::invalid_argument(
          "wsindy_fourier: oracle trajectory shape mismatch");
    for (int i = 0; i < n; ++i)
      selected[i] = top_k_periodogram(oracle.clean->states.col(i),
                                      oracle.top_k);
    tag = "wsindy_fourier_oracle";
  }

  LearnerResult result;
  result.method = tag;
  result.selected_frequencies = selected;
  Eigen::MatrixXd W(spec.size(), n);
  double residual_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const FourierCoeffs yc = fourier_coeffs(data.states.col(i), data.dt);
    const auto& idx = selected[i];
    const int K = static_cast<int>(idx.size());
    Eigen::MatrixXd design(K, spec.size());
    Eigen::VectorXd target(K);
    for (int r = 0; r < K; ++r) {
      const int l = idx[r];
      if (l < 1 || l > L)
        throw std::invalid_argument("wsindy_fourier: frequency index out of range");
      design.row(r) = B.row(l);
      target[r] = -(2.0 * kPi * l / T) * yc.a[l];
    }
    const StRidgeResult solved = st_ridge(design, target, cfg);
    W.col(i) = solved.coeffs;
    result.iterations = std::max(result.iterations, solved.iterations);
    residual_sq += (design * solved.coeffs - target).squaredNorm();
  }
  result.coeffs = CoefficientMatrix{std::move(W), spec};
  result.residual_norm = std::sqrt(residual_sq);
  return result;
}

std::string LearnerResult::to_json() const {
  nlohmann::json doc;
  doc["method"] = method;
  std::vector<std::string> labels;
  for (int j = 0; j < coeffs.spec.size(); ++j)
    labels.push_back(coeffs.spec.term_label(j));
  doc["dictionary"] = labels;
  std::vector<std::vector<double>> w(coeffs.values.rows());
  for (int r = 0; r < coeffs.values.rows(); ++r)
    for (int c = 0; c < coeffs.values.cols(); ++c)
      w[r].push_back(coeffs.values(r, c));
  doc["coefficients"] = w;
  doc["selected_frequencies"] = selected_frequencies;
  doc["residual_norm"] = residual_norm;
  doc["iterations"] = iterations;
  return doc.dump(2);
}

}  // namespace fwsindy
