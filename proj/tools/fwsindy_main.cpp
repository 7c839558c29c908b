#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fwsindy/harness.hpp"
#include "fwsindy/learners.hpp"
#include "fwsindy/ode_bench.hpp"
#include "fwsindy/plot.hpp"
#include "fwsindy/spectral.hpp"
#include "fwsindy/trajectory.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fwsindy;

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
  return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
}

std::map<std::string, double> parse_params(
    const std::vector<std::string>& entries) {
  std::map<std::string, double> params;
  for (const auto& entry : entries) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected name=value");
    params[entry.substr(0, eq)] = std::stod(entry.substr(eq + 1));
  }
  return params;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
}

int run_simulate(const std::string& system,
                 const std::vector<std::string>& params, const std::string& x0,
                 double duration, double sample_rate, double noise_ratio,
                 std::uint64_t seed, const std::string& out) {
  const OdeSystem sys = make_system(system, parse_params(params));
  const Eigen::VectorXd start = x0.empty() ? sys.default_x0() : parse_vector(x0);
  Trajectory traj = simulate(sys, start, duration, sample_rate);
  if (noise_ratio > 0.0) traj = add_noise(traj, NoiseSpec{noise_ratio, seed});
  write_csv(traj, out);
  std::cout << "wrote " << traj.samples() << " samples x " << traj.dim()
            << " states to " << out << "\n";
  return 0;
}

int run_psd(const std::string& input, double nw, const std::string& out_dir) {
  const Trajectory traj = read_trajectory_csv(input);
  fs::create_directories(out_dir);
  for (int i = 0; i < traj.dim(); ++i) {
    const PsdEstimate psd = multitaper_psd(traj.states.col(i), traj.dt, nw);
    const fs::path path =
        fs::path(out_dir) / ("psd_x" + std::to_string(i + 1) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open: " + path.string());
    out << "freq_hz,power\n";
    char buf[96];
    for (int l = 0; l < psd.freqs.size(); ++l) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", psd.freqs[l],
                    psd.power[l]);
      out << buf;
    }
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int run_learn(const std::string& input, int degree, const std::string& method,
              const MethodSpec& params, const std::string& clean_path,
              const SolverConfig& solver, const std::string& out) {
  const Trajectory traj = read_trajectory_csv(input);
  const DictionarySpec spec = build_spec(traj.dim(), degree);

  LearnerResult result;
  if (method == "sindy") {
    result = sindy_classic(traj, spec, solver);
  } else if (method == "wsindy_bump") {
    result = wsindy_bump(
        traj, spec, BumpTestFunctionSpec{params.subdomains, params.exponent},
        solver);
  } else if (method == "wsindy_fourier_sweep") {
    result = wsindy_fourier(traj, spec, SweepSelection{params.max_index},
                            solver);
  } else if (method == "wsindy_fourier_sde") {
    result = wsindy_fourier(
        traj, spec, SdeSelection{params.dominant_count, params.time_bandwidth},
        solver);
  } else if (method == "wsindy_fourier_oracle") {
    if (clean_path.empty())
      throw std::runtime_error("wsindy_fourier_oracle needs --clean <csv>");
    auto clean =
        std::make_shared<const Trajectory>(read_trajectory_csv(clean_path));
    result = wsindy_fourier(
        traj, spec, OracleSelection{params.dominant_count, clean}, solver);
  } else {
    throw std::runtime_error("unknown method: " + method);
  }

  const std::string doc = result.to_json();
  if (out.empty() || out == "-") {
    std::cout << doc << "\n";
  } else {
    write_text_file(out, doc + "\n");
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int run_benchmark(const std::string& config_path, const std::string& preset,
                  bool print_default, std::optional<std::uint64_t> seed,
                  const std::string& out_dir, int jobs) {
  if (print_default) {
    std::cout << ExperimentConfig::default_config().to_json() << "\n";
    return 0;
  }
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config: " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    cfg = ExperimentConfig::from_json(buffer.str());
  } else if (!preset.empty()) {
    cfg = ExperimentConfig::preset(preset);
  } else {
    throw std::runtime_error("benchmark needs --config or --preset");
  }
  if (seed) cfg.seed = *seed;

  fs::create_directories(out_dir);
  const auto table = run_experiment(cfg, jobs);
  write_text_file(fs::path(out_dir) / "results.csv", table.to_csv());

  const auto summary = summarize(table);
  {
    std::ofstream out(fs::path(out_dir) / "summary.csv");
    write_summary_csv(summary, out);
  }
  write_text_file(fs::path(out_dir) / "e2.svg",
                  plot_summary_svg(summary, PlotMetric::CoefficientError));
  write_text_file(fs::path(out_dir) / "tpr.svg",
                  plot_summary_svg(summary, PlotMetric::TruePositiveRatio));

  int failed = 0;
  for (const auto& row : table.rows) failed += row.status != "ok";
  std::cout << "wrote " << table.rows.size() << " rows to " << out_dir
            << "/results.csv (" << failed << " failed), plus summary.csv, "
            << "e2.svg, tpr.svg\n";
  return 0;
}

int run_summarize(const std::string& input, const std::string& out) {
  const ResultTable table = ResultTable::from_csv_file(input);
  const auto summary = summarize(table);
  if (out.empty() || out == "-") {
    write_summary_csv(summary, std::cout);
  } else {
    std::ofstream stream(out);
    if (!stream) throw std::runtime_error("cannot open: " + out);
    write_summary_csv(summary, stream);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier weak SINDy: sparse ODE identification from noisy data"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Integrate a benchmark system and emit a trajectory CSV");
  std::string sim_system = "lorenz", sim_x0, sim_out = "trajectory.csv";
  std::vector<std::string> sim_params;
  double sim_duration = 10.0, sim_fs = 1000.0, sim_noise = 0.0;
  std::uint64_t sim_seed = 0;
  sim->add_option("--system", sim_system, "lorenz | lotka_volterra | hyper_lorenz | hyper_jha");
  sim->add_option("--param", sim_params, "parameter override name=value (repeatable)");
  sim->add_option("--x0", sim_x0, "comma-separated initial state (system default otherwise)");
  sim->add_option("--duration", sim_duration, "duration in seconds");
  sim->add_option("--fs", sim_fs, "sample rate in Hz");
  sim->add_option("--noise-ratio", sim_noise, "sigma_NR of added Gaussian noise");
  sim->add_option("--seed", sim_seed, "noise seed");
  sim->add_option("--out", sim_out, "output CSV path");

  // psd
  auto* psd = app.add_subcommand("psd", "Multitaper PSD of each state component, CSV freq_hz,power");
  std::string psd_input, psd_out_dir = ".";
  double psd_nw = 4.0;
  psd->add_option("--input", psd_input, "trajectory CSV")->required();
  psd->add_option("--nw", psd_nw, "time-bandwidth product");
  psd->add_option("--out-dir", psd_out_dir, "output directory");

  // learn
  auto* learn = app.add_subcommand("learn", "Learn one model from a trajectory CSV, emit JSON");
  std::string learn_input, learn_method = "wsindy_fourier_sde", learn_clean,
              learn_out = "-";
  int learn_degree = 2;
  MethodSpec learn_params;
  SolverConfig learn_solver;
  learn->add_option("--input", learn_input, "trajectory CSV")->required();
  learn->add_option("--degree", learn_degree, "dictionary polynomial degree");
  learn->add_option("--method", learn_method,
                    "sindy | wsindy_bump | wsindy_fourier_sweep | "
                    "wsindy_fourier_sde | wsindy_fourier_oracle");
  learn->add_option("--subdomains", learn_params.subdomains, "bump: subdomain count");
  learn->add_option("--exponent", learn_params.exponent, "bump: exponent q");
  learn->add_option("--max-index", learn_params.max_index, "sweep: highest Fourier index");
  learn->add_option("--top-k", learn_params.dominant_count, "sde/oracle: dominant frequency count");
  learn->add_option("--nw", learn_params.time_bandwidth, "sde: time-bandwidth product");
  learn->add_option("--clean", learn_clean, "oracle: clean trajectory CSV");
  learn->add_option("--threshold", learn_solver.threshold, "solver threshold");
  learn->add_option("--ridge", learn_solver.ridge, "ridge regularization");
  learn->add_option("--max-iterations", learn_solver.max_iters, "solver iteration cap");
  learn->add_flag("--normalize-columns", learn_solver.normalize_columns,
                  "threshold unit-norm-column coefficients");
  learn->add_option("--out", learn_out, "output JSON path, - for stdout");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Full sweep: simulate, noise, learn, metrics, CSV + SVG");
  std::string bench_config, bench_preset, bench_out_dir = ".";
  bool bench_print_default = false;
  std::optional<std::uint64_t> bench_seed;
  int bench_jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (bench_jobs < 1) bench_jobs = 1;
  bench->add_option("--config", bench_config, "experiment config JSON");
  bench->add_option("--preset", bench_preset,
                    "lorenz-default | lorenz-vary-k | lorenz-vary-bw | smoke");
  bench->add_flag("--print-default-config", bench_print_default,
                  "print the stock Lorenz protocol config and exit");
  bench->add_option("--seed", bench_seed, "override config seed");
  bench->add_option("--out-dir", bench_out_dir, "output directory");
  bench->add_option("--jobs", bench_jobs, "worker threads");

  // summarize
  auto* summ = app.add_subcommand("summarize", "Aggregate a results CSV into per-(method, level) quartiles");
  std::string summ_input, summ_out = "-";
  summ->add_option("--input", summ_input, "results CSV")->required();
  summ->add_option("--out", summ_out, "output CSV path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return run_simulate(sim_system, sim_params, sim_x0, sim_duration, sim_fs,
                          sim_noise, sim_seed, sim_out);
    if (psd->parsed()) return run_psd(psd_input, psd_nw, psd_out_dir);
    if (learn->parsed())
      return run_learn(learn_input, learn_degree, learn_method, learn_params,
                       learn_clean, learn_solver, learn_out);
    if (bench->parsed())
      return run_benchmark(bench_config, bench_preset, bench_print_default,
                           bench_seed, bench_out_dir, bench_jobs);
    if (summ->parsed()) return run_summarize(summ_input, summ_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
