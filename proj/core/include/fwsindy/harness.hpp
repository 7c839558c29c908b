#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fwsindy/sparse_regression.hpp"

namespace fwsindy {

struct MethodSpec {
  enum class Kind {
    Sindy,
    WsindyBump,
    WsindyFourierSweep,
    WsindyFourierSde,
    WsindyFourierOracle,
  };

  Kind kind = Kind::WsindyFourierSde;
  int subdomains = 1000;         // bump: p
  int exponent = 4;              // bump: q
  int max_index = 500;           // sweep: L_max
  int dominant_count = 100;      // sde/oracle: K
  double time_bandwidth = 128.0; // sde: nw, saturated-region default

  /// Unique label, e.g. "wsindy_fourier_sde(K=100,nw=4)".
  std::string label() const;
};

struct ExperimentConfig {
  std::string system = "lorenz";
  std::map<std::string, double> params;
  std::optional<Eigen::VectorXd> x0;  // system default when absent
  double duration = 10.0;             // seconds
  double sample_rate = 1000.0;        // Hz
  int degree = 2;
  std::vector<double> noise_levels;   // sigma_NR values
  int instances_per_level = 20;
  std::uint64_t seed = 42;
  std::vector<MethodSpec> methods;
  SolverConfig solver;
  bool trajectory_error_enabled = false;
  double trajectory_error_horizon = 10.0;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);

  /// The stock Lorenz protocol: 10 s at 1000 Hz, degree 2, seven noise
  /// levels, 20 instances, four methods, threshold 0.5, ridge 0.001.
  static ExperimentConfig default_config();

  /// Named presets: lorenz-default, lorenz-vary-k, lorenz-vary-bw, smoke.
  static ExperimentConfig preset(const std::string& name);
  static std::vector<std::string> preset_names();
};

struct ResultRow {
  std::string system;
  std::string method;
  double sigma_nr = 0.0;
  int instance = 0;
  double e2 = 0.0;
  double tpr = 0.0;
  double traj_err = 0.0;  // NaN when trajectory error is disabled
  bool stable = true;
  double wall_time_ms = 0.0;
  int selected_frequency_count = 0;
  std::string status = "ok";  // failure reason otherwise
};

struct ResultTable {
  std::vector<ResultRow> rows;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
  static ResultTable from_csv(std::istream& in);
  static ResultTable from_csv_file(const std::string& path);
};

/// Runs the full sweep: one clean trajectory, an independent noise
/// realization per (level, instance) seeded by derive_seed(seed, level,
/// instance), every method applied to the same realization. Sub-operation
/// failures become failed rows, never aborts. Deterministic up to the
/// wall_time_ms column.
ResultTable run_experiment(const ExperimentConfig& cfg, int jobs = 1);

struct SummaryRow {
  std::string method;
  double sigma_nr = 0.0;
  double e2_median = 0.0, e2_q25 = 0.0, e2_q75 = 0.0;
  double tpr_median = 0.0, tpr_q25 = 0.0, tpr_q75 = 0.0;
  int count = 0;  // rows with status ok
};

/// Per-(method, level) medians and quartiles with linearly interpolated
/// percentiles; failed rows are excluded and counted out.
std::vector<SummaryRow> summarize(const ResultTable& table);

void write_summary_csv(const std::vector<SummaryRow>& summary,
                       std::ostream& out);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// Interpolated percentile (p in [0,1]) of an unsorted sample.
double percentile(std::vector<double> values, double p);

}  // namespace fwsindy
