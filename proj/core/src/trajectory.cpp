#include "fwsindy/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "csv.hpp"

namespace fwsindy {

void Trajectory::validate() const {
  if (samples() < 2) throw std::invalid_argument("Trajectory: need >= 2 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("Trajectory: dt must be > 0");
  if (dim() < 1) throw std::invalid_argument("Trajectory: empty state");
  if (!states.allFinite())
    throw std::invalid_argument("Trajectory: non-finite entries");
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << "t";
  for (int j = 0; j < traj.dim(); ++j) out << ",x" << (j + 1);
  out << "\n";
  for (int i = 0; i < traj.samples(); ++i) {
    out << detail::format_full(traj.time_at(i));
    for (int j = 0; j < traj.dim(); ++j)
      out << "," << detail::format_full(traj.states(i, j));
    out << "\n";
  }
}

void write_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(traj, out);
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("trajectory CSV: empty input");
  const auto header = detail::split_csv_line(line);
  if (header.size() < 2 || header[0] != "t")
    throw std::runtime_error("trajectory CSV: expected header t,x1,...");
  const int n = static_cast<int>(header.size()) - 1;

  std::vector<double> times;
  std::vector<double> data;  // row-major
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (static_cast<int>(fields.size()) != n + 1)
      throw std::runtime_error("trajectory CSV: ragged row");
    times.push_back(std::stod(fields[0]));
    for (int j = 1; j <= n; ++j) data.push_back(std::stod(fields[j]));
  }
  const int k = static_cast<int>(times.size());
  if (k < 2) throw std::runtime_error("trajectory CSV: need >= 2 rows");

  Trajectory traj;
  traj.t0 = times[0];
  traj.dt = times[1] - times[0];
  if (!(traj.dt > 0.0))
    throw std::runtime_error("trajectory CSV: non-increasing time column");
  for (int i = 1; i < k; ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - traj.dt) > 1e-9 * std::max(1.0, std::abs(traj.dt)))
      throw std::runtime_error("trajectory CSV: non-uniform sampling");
  }
  traj.states.resize(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) traj.states(i, j) = data[i * n + j];
  traj.validate();
  return traj;
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_trajectory_csv(in);
}

}  // namespace fwsindy
