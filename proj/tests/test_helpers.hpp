#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fwsindy/ode_bench.hpp"
#include "fwsindy/rng.hpp"
#include "fwsindy/trajectory.hpp"

namespace testutil {

/// Deterministic uniform matrix in [lo, hi).
inline Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed,
                                     double lo = -1.0, double hi = 1.0) {
  fwsindy::SplitMix64 rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = lo + (hi - lo) * rng.uniform01();
  return m;
}

inline Eigen::VectorXd random_vector(int size, std::uint64_t seed,
                                     double lo = -1.0, double hi = 1.0) {
  return random_matrix(size, 1, seed, lo, hi).col(0);
}

/// The canonical clean benchmark trajectory, shared across tests.
inline const fwsindy::Trajectory& clean_lorenz_10s() {
  static const fwsindy::Trajectory traj = [] {
    const auto sys = fwsindy::make_system("lorenz");
    return fwsindy::simulate(sys, sys.default_x0(), 10.0, 1000.0);
  }();
  return traj;
}

/// Minimal XML well-formedness check: every open tag is closed in order,
/// attributes quoted. Good enough to vet generated SVG documents.
inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;  // declaration / comment
    const bool closing = tag[0] == '/';
    const bool self_closing = tag.back() == '/';
    if (closing) tag = tag.substr(1);
    if (self_closing) tag.pop_back();
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) return false;
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

inline int count_occurrences(const std::string& text,
                             const std::string& needle) {
  int count = 0;
  size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace testutil
