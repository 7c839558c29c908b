#include "fwsindy/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "fwsindy/learners.hpp"
#include "fwsindy/metrics.hpp"
#include "fwsindy/ode_bench.hpp"
#include "fwsindy/rng.hpp"

namespace fwsindy {

namespace {

std::string kind_name(MethodSpec::Kind kind) {
  switch (kind) {
    case MethodSpec::Kind::Sindy: return "sindy";
    case MethodSpec::Kind::WsindyBump: return "wsindy_bump";
    case MethodSpec::Kind::WsindyFourierSweep: return "wsindy_fourier_sweep";
    case MethodSpec::Kind::WsindyFourierSde: return "wsindy_fourier_sde";
    case MethodSpec::Kind::WsindyFourierOracle: return "wsindy_fourier_oracle";
  }
  throw std::logic_error("unreachable");
}

MethodSpec::Kind kind_from_name(const std::string& name) {
  if (name == "sindy") return MethodSpec::Kind::Sindy;
  if (name == "wsindy_bump") return MethodSpec::Kind::WsindyBump;
  if (name == "wsindy_fourier_sweep") return MethodSpec::Kind::WsindyFourierSweep;
  if (name == "wsindy_fourier_sde") return MethodSpec::Kind::WsindyFourierSde;
  if (name == "wsindy_fourier_oracle")
    return MethodSpec::Kind::WsindyFourierOracle;
  throw std::invalid_argument("unknown method type: " + name);
}

}  // namespace

std::string MethodSpec::label() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Sindy:
      out << "sindy";
      break;
    case Kind::WsindyBump:
      out << "wsindy_bump(p=" << subdomains << ";q=" << exponent << ")";
      break;
    case Kind::WsindyFourierSweep:
      out << "wsindy_fourier_sweep(L=" << max_index << ")";
      break;
    case Kind::WsindyFourierSde:
      out << "wsindy_fourier_sde(K=" << dominant_count
          << ";nw=" << detail::format_short(time_bandwidth) << ")";
      break;
    case Kind::WsindyFourierOracle:
      out << "wsindy_fourier_oracle(K=" << dominant_count << ")";
      break;
  }
  return out.str();
}

namespace {

nlohmann::json method_to_json(const MethodSpec& m) {
  nlohmann::json j;
  j["type"] = kind_name(m.kind);
  switch (m.kind) {
    case MethodSpec::Kind::Sindy:
      break;
    case MethodSpec::Kind::WsindyBump:
      j["subdomains"] = m.subdomains;
      j["exponent"] = m.exponent;
      break;
    case MethodSpec::Kind::WsindyFourierSweep:
      j["max_frequency_index"] = m.max_index;
      break;
    case MethodSpec::Kind::WsindyFourierSde:
      j["dominant_frequencies"] = m.dominant_count;
      j["time_bandwidth"] = m.time_bandwidth;
      break;
    case MethodSpec::Kind::WsindyFourierOracle:
      j["dominant_frequencies"] = m.dominant_count;
      break;
  }
  return j;
}

MethodSpec method_from_json(const nlohmann::json& j) {
  MethodSpec m;
  m.kind = kind_from_name(j.at("type").get<std::string>());
  if (j.contains("subdomains")) m.subdomains = j["subdomains"].get<int>();
  if (j.contains("exponent")) m.exponent = j["exponent"].get<int>();
  if (j.contains("max_frequency_index"))
    m.max_index = j["max_frequency_index"].get<int>();
  if (j.contains("dominant_frequencies"))
    m.dominant_count = j["dominant_frequencies"].get<int>();
  if (j.contains("time_bandwidth"))
    m.time_bandwidth = j["time_bandwidth"].get<double>();
  return m;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["system"]["name"] = system;
  j["system"]["params"] = params;
  if (x0) j["x0"] = std::vector<double>(x0->data(), x0->data() + x0->size());
  j["duration_s"] = duration;
  j["sample_rate_hz"] = sample_rate;
  j["dictionary_degree"] = degree;
  j["noise_levels"] = noise_levels;
  j["instances_per_level"] = instances_per_level;
  j["seed"] = seed;
  j["methods"] = nlohmann::json::array();
  for (const auto& m : methods) j["methods"].push_back(method_to_json(m));
  j["solver"]["threshold"] = solver.threshold;
  j["solver"]["ridge"] = solver.ridge;
  j["solver"]["max_iterations"] = solver.max_iters;
  j["solver"]["normalize_columns"] = solver.normalize_columns;
  j["trajectory_error"]["enabled"] = trajectory_error_enabled;
  j["trajectory_error"]["horizon_s"] = trajectory_error_horizon;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.system = j.at("system").at("name").get<std::string>();
    if (j["system"].contains("params"))
      cfg.params = j["system"]["params"].get<std::map<std::string, double>>();
    if (j.contains("x0")) {
      const auto v = j["x0"].get<std::vector<double>>();
      cfg.x0 = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    }
    if (j.contains("duration_s")) cfg.duration = j["duration_s"].get<double>();
    if (j.contains("sample_rate_hz"))
      cfg.sample_rate = j["sample_rate_hz"].get<double>();
    if (j.contains("dictionary_degree"))
      cfg.degree = j["dictionary_degree"].get<int>();
    cfg.noise_levels = j.at("noise_levels").get<std::vector<double>>();
    if (j.contains("instances_per_level"))
      cfg.instances_per_level = j["instances_per_level"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    for (const auto& jm : j.at("methods"))
      cfg.methods.push_back(method_from_json(jm));
    if (j.contains("solver")) {
      const auto& js = j["solver"];
      if (js.contains("threshold"))
        cfg.solver.threshold = js["threshold"].get<double>();
      if (js.contains("ridge")) cfg.solver.ridge = js["ridge"].get<double>();
      if (js.contains("max_iterations"))
        cfg.solver.max_iters = js["max_iterations"].get<int>();
      if (js.contains("normalize_columns"))
        cfg.solver.normalize_columns = js["normalize_columns"].get<bool>();
    }
    if (j.contains("trajectory_error")) {
      const auto& jt = j["trajectory_error"];
      if (jt.contains("enabled"))
        cfg.trajectory_error_enabled = jt["enabled"].get<bool>();
      if (jt.contains("horizon_s"))
        cfg.trajectory_error_horizon = jt["horizon_s"].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }
  for (double level : cfg.noise_levels)
    if (level < 0.0)
      throw std::invalid_argument("config error: negative noise level");
  if (cfg.instances_per_level < 1)
    throw std::invalid_argument("config error: instances_per_level must be >= 1");
  return cfg;
}

ExperimentConfig ExperimentConfig::default_config() {
  ExperimentConfig cfg;
  cfg.system = "lorenz";
  cfg.duration = 10.0;
  cfg.sample_rate = 1000.0;
  cfg.degree = 2;
  cfg.noise_levels = {1e-6, 1e-4, 1e-2, 0.05, 0.25, 0.5, 1.0};
  cfg.instances_per_level = 20;
  cfg.seed = 42;
  MethodSpec sindy;
  sindy.kind = MethodSpec::Kind::Sindy;
  MethodSpec bump;
  bump.kind = MethodSpec::Kind::WsindyBump;
  bump.subdomains = 1000;
  bump.exponent = 4;
  MethodSpec sweep;
  sweep.kind = MethodSpec::Kind::WsindyFourierSweep;
  sweep.max_index = 500;
  MethodSpec sde;
  sde.kind = MethodSpec::Kind::WsindyFourierSde;
  sde.dominant_count = 100;
  sde.time_bandwidth = 128.0;
  cfg.methods = {sindy, bump, sweep, sde};
  cfg.solver.threshold = 0.5;
  cfg.solver.ridge = 0.001;
  return cfg;
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  if (name == "lorenz-default") return default_config();
  if (name == "lorenz-vary-k") {
    ExperimentConfig cfg = default_config();
    cfg.noise_levels = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    cfg.methods.clear();
    for (int K : {30, 50, 100, 200}) {
      MethodSpec m;
      m.kind = MethodSpec::Kind::WsindyFourierOracle;
      m.dominant_count = K;
      cfg.methods.push_back(m);
    }
    return cfg;
  }
  if (name == "lorenz-vary-bw") {
    ExperimentConfig cfg = default_config();
    cfg.noise_levels = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    cfg.methods.clear();
    // Bandwidth in Hz is nw / duration; this sweep shows the saturation.
    for (double nw : {4.0, 16.0, 32.0, 64.0, 128.0}) {
      MethodSpec m;
      m.kind = MethodSpec::Kind::WsindyFourierSde;
      m.dominant_count = 100;
      m.time_bandwidth = nw;
      cfg.methods.push_back(m);
    }
    return cfg;
  }
  if (name == "smoke") {
    ExperimentConfig cfg = default_config();
    cfg.duration = 2.0;
    cfg.sample_rate = 500.0;
    cfg.noise_levels = {0.0, 0.25};
    cfg.instances_per_level = 2;
    MethodSpec sindy;
    sindy.kind = MethodSpec::Kind::Sindy;
    MethodSpec sde;
    sde.kind = MethodSpec::Kind::WsindyFourierSde;
    sde.dominant_count = 50;
    sde.time_bandwidth = 4.0;
    cfg.methods = {sindy, sde};
    return cfg;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> ExperimentConfig::preset_names() {
  return {"lorenz-default", "lorenz-vary-k", "lorenz-vary-bw", "smoke"};
}

namespace {

std::string sanitize_status(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return text;
}

int selection_count(const LearnerResult& result) {
  int count = 0;
  for (const auto& idx : result.selected_frequencies)
    count += static_cast<int>(idx.size());
  return count;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg, int jobs) {
  if (cfg.methods.empty())
    throw std::invalid_argument("run_experiment: no methods configured");
  if (jobs < 1) jobs = 1;

  const OdeSystem sys = make_system(cfg.system, cfg.params);
  const Eigen::VectorXd x0 = cfg.x0 ? *cfg.x0 : sys.default_x0();
  const DictionarySpec spec = build_spec(sys.dim(), cfg.degree);
  const CoefficientMatrix truth = sys.true_coeffs(spec);

  const auto clean = std::make_shared<const Trajectory>(
      simulate(sys, x0, cfg.duration, cfg.sample_rate));

  const int n_levels = static_cast<int>(cfg.noise_levels.size());
  const int n_methods = static_cast<int>(cfg.methods.size());
  const int n_instances = cfg.instances_per_level;

  ResultTable table;
  table.rows.resize(static_cast<size_t>(n_methods) * n_levels * n_instances);
  auto row_index = [&](int mi, int li, int ii) {
    return (static_cast<size_t>(mi) * n_levels + li) * n_instances + ii;
  };

  // One work cell per (level, instance); every method sees the same noisy
  // realization. Cells write disjoint row slots, so no locking.
  const int n_cells = n_levels * n_instances;
  std::atomic<int> next_cell{0};

  auto run_cell = [&](int cell) {
    const int li = cell / n_instances;
    const int ii = cell % n_instances;
    const double level = cfg.noise_levels[li];
    NoiseSpec noise;
    noise.noise_ratio = level;
    noise.seed = derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(li)),
                             static_cast<std::uint64_t>(ii));
    const Trajectory noisy = add_noise(*clean, noise);

    for (int mi = 0; mi < n_methods; ++mi) {
      const MethodSpec& method = cfg.methods[mi];
      ResultRow row;
      row.system = cfg.system;
      row.method = method.label();
      row.sigma_nr = level;
      row.instance = ii;
      row.traj_err = std::numeric_limits<double>::quiet_NaN();
      const auto start = std::chrono::steady_clock::now();
      try {
        LearnerResult learned;
        switch (method.kind) {
          case MethodSpec::Kind::Sindy:
            learned = sindy_classic(noisy, spec, cfg.solver);
            break;
          case MethodSpec::Kind::WsindyBump: {
            BumpTestFunctionSpec tf;
            tf.subdomains = method.subdomains;
            tf.exponent = method.exponent;
            learned = wsindy_bump(noisy, spec, tf, cfg.solver);
            break;
          }
          case MethodSpec::Kind::WsindyFourierSweep:
            learned = wsindy_fourier(noisy, spec,
                                     SweepSelection{method.max_index},
                                     cfg.solver);
            break;
          case MethodSpec::Kind::WsindyFourierSde:
            learned = wsindy_fourier(
                noisy, spec,
                SdeSelection{method.dominant_count, method.time_bandwidth},
                cfg.solver);
            break;
          case MethodSpec::Kind::WsindyFourierOracle:
            learned = wsindy_fourier(
                noisy, spec, OracleSelection{method.dominant_count, clean},
                cfg.solver);
            break;
        }
        row.e2 = coeff_error(learned.coeffs, truth);
        row.tpr = true_positive_ratio(learned.coeffs, truth);
        row.selected_frequency_count = selection_count(learned);
        if (cfg.trajectory_error_enabled) {
          const TrajectoryErrorResult te =
              trajectory_error(learned.coeffs, sys, x0,
                               cfg.trajectory_error_horizon, cfg.sample_rate);
          row.traj_err = te.eps2;
          row.stable = te.stable;
        }
      } catch (const std::exception& e) {
        row.e2 = std::numeric_limits<double>::quiet_NaN();
        row.tpr = std::numeric_limits<double>::quiet_NaN();
        row.stable = false;
        row.status = sanitize_status(e.what());
      }
      row.wall_time_ms =
          std::chrono::duration<double, std::milli>(
              std::chrono::steady_clock::now() - start)
              .count();
      table.rows[row_index(mi, li, ii)] = std::move(row);
    }
  };

  if (jobs == 1 || n_cells == 1) {
    for (int cell = 0; cell < n_cells; ++cell) run_cell(cell);
  } else {
    auto worker = [&] {
      while (true) {
        const int cell = next_cell.fetch_add(1);
        if (cell >= n_cells) break;
        run_cell(cell);
      }
    };
    std::vector<std::thread> pool;
    const int extra = std::min(jobs, n_cells) - 1;
    pool.reserve(extra);
    for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }
  return table;
}

void ResultTable::write_csv(std::ostream& out) const {
  out << "system,method,sigma_nr,instance,e2,tpr,traj_err,stable,"
         "wall_time_ms,selected_frequency_count,status\n";
  for (const auto& r : rows) {
    out << r.system << ',' << r.method << ','
        << detail::format_full(r.sigma_nr) << ',' << r.instance << ','
        << detail::format_full(r.e2) << ',' << detail::format_full(r.tpr)
        << ',' << detail::format_full(r.traj_err) << ',' << (r.stable ? 1 : 0)
        << ',' << detail::format_full(r.wall_time_ms) << ','
        << r.selected_frequency_count << ',' << r.status << '\n';
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

ResultTable ResultTable::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("results CSV: empty input");
  ResultTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 11) throw std::runtime_error("results CSV: ragged row");
    ResultRow r;
    r.system = f[0];
    r.method = f[1];
    r.sigma_nr = std::stod(f[2]);
    r.instance = std::stoi(f[3]);
    r.e2 = std::stod(f[4]);
    r.tpr = std::stod(f[5]);
    r.traj_err = std::stod(f[6]);
    r.stable = f[7] == "1";
    r.wall_time_ms = std::stod(f[8]);
    r.selected_frequency_count = std::stoi(f[9]);
    r.status = f[10];
    table.rows.push_back(std::move(r));
  }
  return table;
}

ResultTable ResultTable::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return from_csv(in);
}

double percentile(std::vector<double> values, double p) {
  if (values.empty())
    throw std::invalid_argument("percentile: empty sample");
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("percentile: p must be in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (values.size() - 1) * p;
  const size_t lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - lo;
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<SummaryRow> summarize(const ResultTable& table) {
  if (table.rows.empty())
    throw std::invalid_argument("summarize: empty table");

  // Group by (method, level), preserving first-seen method order and
  // ascending level order.
  std::vector<std::string> methods;
  std::vector<double> levels;
  for (const auto& r : table.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    if (std::find(levels.begin(), levels.end(), r.sigma_nr) == levels.end())
      levels.push_back(r.sigma_nr);
  }
  std::sort(levels.begin(), levels.end());

  std::vector<SummaryRow> summary;
  for (const auto& method : methods) {
    for (double level : levels) {
      std::vector<double> e2s, tprs;
      for (const auto& r : table.rows) {
        if (r.method != method || r.sigma_nr != level) continue;
        if (r.status != "ok") continue;
        e2s.push_back(r.e2);
        tprs.push_back(r.tpr);
      }
      if (e2s.empty()) continue;
      SummaryRow s;
      s.method = method;
      s.sigma_nr = level;
      s.count = static_cast<int>(e2s.size());
      s.e2_median = percentile(e2s, 0.5);
      s.e2_q25 = percentile(e2s, 0.25);
      s.e2_q75 = percentile(e2s, 0.75);
      s.tpr_median = percentile(tprs, 0.5);
      s.tpr_q25 = percentile(tprs, 0.25);
      s.tpr_q75 = percentile(tprs, 0.75);
      summary.push_back(std::move(s));
    }
  }
  return summary;
}

void write_summary_csv(const std::vector<SummaryRow>& summary,
                       std::ostream& out) {
  out << "method,sigma_nr,e2_median,e2_q25,e2_q75,tpr_median,tpr_q25,"
         "tpr_q75,count\n";
  for (const auto& s : summary) {
    out << s.method << ',' << detail::format_full(s.sigma_nr) << ','
        << detail::format_full(s.e2_median) << ','
        << detail::format_full(s.e2_q25) << ','
        << detail::format_full(s.e2_q75) << ','
        << detail::format_full(s.tpr_median) << ','
        << detail::format_full(s.tpr_q25) << ','
        << detail::format_full(s.tpr_q75) << ',' << s.count << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("summary CSV: empty input");
  std::vector<SummaryRow> summary;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) throw std::runtime_error("summary CSV: ragged row");
    SummaryRow s;
    s.method = f[0];
    s.sigma_nr = std::stod(f[1]);
    s.e2_median = std::stod(f[2]);
    s.e2_q25 = std::stod(f[3]);
    s.e2_q75 = std::stod(f[4]);
    s.tpr_median = std::stod(f[5]);
    s.tpr_q25 = std::stod(f[6]);
    s.tpr_q75 = std::stod(f[7]);
    s.count = std::stoi(f[8]);
    summary.push_back(std::move(s));
  }
  return summary;
}

}  // namespace fwsindy
