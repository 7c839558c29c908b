#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "fwsindy/dictionary.hpp"
#include "fwsindy/sparse_regression.hpp"
#include "fwsindy/spectral.hpp"
#include "fwsindy/trajectory.hpp"

namespace fwsindy {

/// Compactly supported polynomial test functions (1 - t_bar^2)^q on p
/// equal-width subdomains tiling one sample period [t0, t0 + k*dt].
struct BumpTestFunctionSpec {
  int subdomains = 1000;  // p
  int exponent = 4;       // q
};

/// (1 - t_bar^2)^q for |t_bar| <= 1, zero outside.
double bump_value(double t_bar, int q);
/// d/dt of the above with t_bar = (t - center)/half_width.
double bump_derivative(double t_bar, int q, double half_width);

/// How wsindy_fourier picks its test-function frequencies.
struct SweepSelection {
  int l_max = 500;
};
/// Default bandwidth sits in the saturated region of the
/// accuracy-vs-bandwidth curve (12.8 Hz on a 10 s record); small nw leaves
/// the noisy-data selection chasing noise-floor fluctuations.
struct SdeSelection {
  int top_k = 100;
  double nw = 128.0;
};
struct OracleSelection {
  int top_k = 100;
  std::shared_ptr<const Trajectory> clean;  // periodogram source
};
using FrequencyPlan =
    std::variant<SweepSelection, SdeSelection, OracleSelection>;

struct LearnerResult {
  CoefficientMatrix coeffs;
  std::string method;
  /// Per-component test-function frequency indices; empty for non-Fourier
  /// methods.
  std::vector<std::vector<int>> selected_frequencies;
  double residual_norm = 0.0;
  int iterations = 0;

  std::string to_json() const;
};

/// Classic SINDy: second-order finite-difference derivative estimates
/// regressed on the dictionary matrix.
LearnerResult sindy_classic(const Trajectory& data, const DictionarySpec& spec,
                            const SolverConfig& cfg);

/// Weak-form SINDy with bump test functions and trapezoid quadrature.
LearnerResult wsindy_bump(const Trajectory& data, const DictionarySpec& spec,
                          const BumpTestFunctionSpec& tf,
                          const SolverConfig& cfg);

/// Fourier weak SINDy: sinusoidal test functions reduce the weak form to a
/// regression over FFT-computed Fourier coefficients at the planned
/// frequencies.
LearnerResult wsindy_fourier(const Trajectory& data, const DictionarySpec& spec,
                             const FrequencyPlan& plan,
                             const SolverConfig& cfg);

/// One component's regression system: design rows are sine coefficients of
/// the dictionary columns at the selected indices, the target stacks
/// -(2 pi l / T) a_l of the measured component. Exposed for diagnostics and
/// cross-checks against explicit quadrature.
struct FourierSystem {
  Eigen::MatrixXd design;   // K x m
  Eigen::VectorXd target;   // K
};

FourierSystem assemble_fourier_system(const Trajectory& data,
                                      const DictionarySpec& spec,
                                      const std::vector<int>& indices,
                                      int component);

}  // namespace fwsindy
