#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace fwsindy {

/// Uniformly sampled multivariate time series. Row i of `states` is the
/// state at time t0 + i*dt.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  Eigen::MatrixXd states;  // samples x dim

  int samples() const { return static_cast<int>(states.rows()); }
  int dim() const { return static_cast<int>(states.cols()); }
  double time_at(int i) const { return t0 + i * dt; }

  /// Time from first to last sample, (samples-1)*dt.
  double duration() const { return (samples() - 1) * dt; }

  /// Throws std::invalid_argument unless samples >= 2, dt > 0 and all
  /// entries are finite.
  void validate() const;
};

/// CSV with header "t,x1,...,xn", one row per sample, 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);
void write_csv(const Trajectory& traj, const std::string& path);

Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace fwsindy
