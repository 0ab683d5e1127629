#include "bfcs/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bfcs/errors.hpp"

namespace bfcs::io {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return r;
  }
  return v;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

bool is_json(const fs::path& path) { return path.extension() == ".json"; }

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

BfcsGrid grid_from_json(const Json& j) {
  BfcsGrid g;
  g.tau = j.at("tau").get<std::vector<double>>();
  g.eps_factor = j.at("eps_factor").get<std::vector<double>>();
  return g;
}

Json grid_to_json(const BfcsGrid& g) { return {{"tau", g.tau}, {"eps_factor", g.eps_factor}}; }

Json summary_json(const MetricSummary& s) {
  auto clean = [](double v) -> Json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  return {{"mean", clean(s.mean)}, {"stddev", clean(s.stddev)}};
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_matrix(const fs::path& path, const SensingMatrix& a) {
  std::ofstream out = open_out(path, std::ios::binary);
  out.write(kMatrixMagic.data(), kMatrixMagic.size());
  for (std::uint64_t dim : {std::uint64_t{a.rows()}, std::uint64_t{a.cols()}}) {
    const std::uint64_t le = to_little(dim);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
  for (double v : a.entries()) {
    const std::uint64_t le = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

SensingMatrix read_matrix(const fs::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMatrixMagic) {
    throw std::runtime_error(path.string() + " is not a sensing matrix file (bad magic)");
  }
  std::uint64_t dims[2];
  for (std::uint64_t& d : dims) {
    in.read(reinterpret_cast<char*>(&d), sizeof d);
    d = to_little(d);
  }
  if (!in) throw std::runtime_error(path.string() + ": truncated header");
  const std::uint64_t count = dims[0] * dims[1];
  if (dims[0] == 0 || dims[1] == 0 || count / dims[0] != dims[1] || count > (1ULL << 34)) {
    throw std::runtime_error(path.string() + ": invalid dimensions");
  }
  std::vector<double> entries(count);
  for (double& v : entries) {
    std::uint64_t bits;
    in.read(reinterpret_cast<char*>(&bits), sizeof bits);
    v = std::bit_cast<double>(to_little(bits));
  }
  if (!in) throw std::runtime_error(path.string() + ": truncated entries");
  try {
    return SensingMatrix(dims[0], dims[1], std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_vector_csv(const fs::path& path, std::span<const double> v) {
  std::ofstream out = open_out(path);
  for (double x : v) out << num(x) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Vector read_vector_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  Vector v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    char* end = nullptr;
    const double x = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": not a number");
    }
    v.push_back(x);
  }
  return v;
}

Json signal_to_json(std::span<const double> v) {
  return {{"n", v.size()}, {"values", std::vector<double>(v.begin(), v.end())}};
}

Vector signal_from_json(const Json& j) {
  Vector v = j.at("values").get<Vector>();
  if (j.at("n").get<std::size_t>() != v.size()) {
    throw std::runtime_error("signal envelope: n does not match number of values");
  }
  return v;
}

Json observations_to_json(const SignObservations& y) {
  std::vector<int> signs(y.signs().begin(), y.signs().end());
  return {{"m", y.size()}, {"signs", signs}};
}

SignObservations observations_from_json(const Json& j) {
  const auto raw = j.at("signs").get<std::vector<int>>();
  if (j.at("m").get<std::size_t>() != raw.size()) {
    throw std::runtime_error("observation envelope: m does not match number of signs");
  }
  return SignObservations(std::vector<std::int8_t>(raw.begin(), raw.end()));
}

void write_observations_csv(const fs::path& path, const SignObservations& y) {
  std::ofstream out = open_out(path);
  for (std::int8_t s : y.signs()) out << static_cast<int>(s) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

SignObservations read_observations_csv(const fs::path& path) {
  std::vector<std::int8_t> signs;
  for (double v : read_vector_csv(path)) signs.push_back(static_cast<std::int8_t>(v));
  try {
    return SignObservations(std::move(signs));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_signal(const fs::path& path, std::span<const double> v) {
  if (is_json(path)) {
    write_text(path, signal_to_json(v).dump() + "\n");
  } else {
    write_vector_csv(path, v);
  }
}

Vector read_signal(const fs::path& path) {
  if (!is_json(path)) return read_vector_csv(path);
  try {
    return signal_from_json(Json::parse(read_text(path)));
  } catch (const Json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_observations(const fs::path& path, const SignObservations& y) {
  if (is_json(path)) {
    write_text(path, observations_to_json(y).dump() + "\n");
  } else {
    write_observations_csv(path, y);
  }
}

SignObservations read_observations(const fs::path& path) {
  if (!is_json(path)) return read_observations_csv(path);
  try {
    return observations_from_json(Json::parse(read_text(path)));
  } catch (const Json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Json solver_config_to_json(const SolverConfig& c) {
  Json j;
  j["algorithm"] = std::string(to_string(c.algorithm));
  j["objective"] = std::string(to_string(c.objective));
  j["tau"] = c.tau;
  j["K"] = c.k;
  j["epsilon"] = c.epsilon ? Json(*c.epsilon) : Json(nullptr);
  j["nonneg"] = c.nonneg;
  j["max_iter"] = c.max_iter;
  j["tol"] = c.tol;
  j["x0"] = c.x0 ? Json(*c.x0) : Json(nullptr);
  return j;
}

SolverConfig solver_config_from_json(const Json& j) {
  static const char* const kKnown[] = {"algorithm", "objective", "tau", "K",  "epsilon",
                                       "nonneg",    "max_iter",  "tol", "x0"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw std::runtime_error("unknown solver config field '" + key + "'");
    }
  }
  SolverConfig c;
  c.algorithm = algorithm_from_string(get_or<std::string>(j, "algorithm", "BIHT"));
  c.objective = objective_from_string(get_or<std::string>(j, "objective", "ONE_SIDED_L1"));
  c.tau = get_or(j, "tau", c.tau);
  c.k = get_or(j, "K", c.k);
  if (j.contains("epsilon") && !j["epsilon"].is_null()) c.epsilon = j["epsilon"].get<double>();
  c.nonneg = get_or(j, "nonneg", c.nonneg);
  c.max_iter = get_or(j, "max_iter", c.max_iter);
  c.tol = get_or(j, "tol", c.tol);
  if (j.contains("x0") && !j["x0"].is_null()) c.x0 = j["x0"].get<Vector>();
  c.validate();
  return c;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace) {
  out << "iteration,objective,hamming,rel_change\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const IterationRecord& r = trace[i];
    out << (i + 1) << ',' << num(r.objective) << ',' << r.hamming << ',' << num(r.rel_change)
        << '\n';
  }
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  Json algorithms = Json::array();
  for (const AlgorithmSpec& a : c.algorithms) {
    Json ja{{"label", a.label},
            {"algorithm", std::string(to_string(a.algorithm))},
            {"objective", std::string(to_string(a.objective))},
            {"start", a.start == StartPoint::kZero ? "zero" : "backprojection"},
            {"nonneg", a.nonneg}};
    ja["tau"] = a.tau ? Json(*a.tau) : Json(nullptr);
    if (a.grid) ja["grid"] = grid_to_json(*a.grid);
    algorithms.push_back(ja);
  }
  Json j{{"n", c.n},
         {"m", c.m},
         {"K_list", c.k_list},
         {"sigma_list", c.sigma_list},
         {"algorithms", algorithms},
         {"trials", c.trials},
         {"base_seed", c.base_seed.value},
         {"tau", c.tau},
         {"tol", c.tol},
         {"max_iter", c.max_iter},
         {"noise_reference",
          c.noise_reference == NoiseReference::kUnnormalized ? "unnormalized" : "normalized"},
         {"signal",
          {{"positive_level", c.signal.positive_level},
           {"negative_level", c.signal.negative_level},
           {"jitter_std", c.signal.jitter_std},
           {"positive_starts", c.signal.positive_starts},
           {"negative_starts", c.signal.negative_starts}}}};
  j["bfcs_grid"] = c.bfcs_grid ? grid_to_json(*c.bfcs_grid) : Json(nullptr);
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig c;
  c.n = get_or(j, "n", c.n);
  c.m = get_or(j, "m", c.m);
  c.k_list = get_or(j, "K_list", c.k_list);
  c.sigma_list = get_or(j, "sigma_list", c.sigma_list);
  c.trials = get_or(j, "trials", c.trials);
  c.base_seed.value = get_or(j, "base_seed", c.base_seed.value);
  c.tau = get_or(j, "tau", c.tau);
  c.tol = get_or(j, "tol", c.tol);
  c.max_iter = get_or(j, "max_iter", c.max_iter);

  const std::string ref = get_or<std::string>(j, "noise_reference", "unnormalized");
  if (ref == "unnormalized") {
    c.noise_reference = NoiseReference::kUnnormalized;
  } else if (ref == "normalized") {
    c.noise_reference = NoiseReference::kNormalized;
  } else {
    throw std::runtime_error("noise_reference must be 'unnormalized' or 'normalized'");
  }

  if (j.contains("signal") && !j["signal"].is_null()) {
    const Json& s = j["signal"];
    c.signal.positive_level = get_or(s, "positive_level", c.signal.positive_level);
    c.signal.negative_level = get_or(s, "negative_level", c.signal.negative_level);
    c.signal.jitter_std = get_or(s, "jitter_std", c.signal.jitter_std);
    c.signal.positive_starts = get_or(s, "positive_starts", c.signal.positive_starts);
    c.signal.negative_starts = get_or(s, "negative_starts", c.signal.negative_starts);
  }
  if (j.contains("bfcs_grid") && !j["bfcs_grid"].is_null()) {
    c.bfcs_grid = grid_from_json(j["bfcs_grid"]);
  }

  if (!j.contains("algorithms") || j["algorithms"].is_null()) {
    c.algorithms = default_algorithms();
  } else {
    for (const Json& ja : j["algorithms"]) {
      AlgorithmSpec a;
      a.algorithm = algorithm_from_string(ja.at("algorithm").get<std::string>());
      a.objective = objective_from_string(get_or<std::string>(ja, "objective", "ONE_SIDED_L1"));
      a.label = get_or<std::string>(
          ja, "label",
          std::string(to_string(a.algorithm)) +
              (a.objective == ObjectiveKind::kOneSidedL2 ? "-l2" : ""));
      if (ja.contains("tau") && !ja["tau"].is_null()) a.tau = ja["tau"].get<double>();
      const std::string start = get_or<std::string>(ja, "start", "zero");
      if (start == "zero") {
        a.start = StartPoint::kZero;
      } else if (start == "backprojection") {
        a.start = StartPoint::kBackprojection;
      } else {
        throw std::runtime_error("start must be 'zero' or 'backprojection'");
      }
      a.nonneg = get_or(ja, "nonneg", false);
      if (ja.contains("grid") && !ja["grid"].is_null()) a.grid = grid_from_json(ja["grid"]);
      c.algorithms.push_back(std::move(a));
    }
  }
  c.validate();
  return c;
}

ExperimentConfig read_experiment_config(const fs::path& path) {
  try {
    return experiment_config_from_json(Json::parse(read_text(path)));
  } catch (const Json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string metric_csv_header() { return "algorithm,K,sigma,seed,mae,mse,snr_db,per,age"; }

std::string metric_csv_row(const std::string& algorithm, std::size_t k, double sigma,
                           std::uint64_t seed, const MetricReport& m) {
  return algorithm + ',' + std::to_string(k) + ',' + num(sigma) + ',' + std::to_string(seed) +
         ',' + num(m.mae) + ',' + num(m.mse) + ',' + num(m.snr_db) + ',' + num(m.per) + ',' +
         num(m.age);
}

void write_rows_csv(std::ostream& out, const ExperimentReport& report) {
  out << metric_csv_header() << ",trial,iterations,converged,tau,epsilon,status\n";
  for (const ExperimentRow& r : report.rows) {
    out << metric_csv_row(r.algorithm, r.k, r.sigma, r.seed, r.metrics) << ',' << r.trial << ','
        << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << num(r.tau) << ','
        << num(r.epsilon) << ',' << r.status << '\n';
  }
}

void write_timings_csv(std::ostream& out, const ExperimentReport& report) {
  out << "algorithm,K,sigma,trial,wall_time\n";
  for (const ExperimentRow& r : report.rows) {
    out << r.algorithm << ',' << r.k << ',' << num(r.sigma) << ',' << r.trial << ','
        << num(r.wall_time) << '\n';
  }
}

Json aggregates_to_json(const ExperimentReport& report) {
  Json arr = Json::array();
  for (const AggregateRow& a : report.aggregates) {
    arr.push_back({{"algorithm", a.algorithm},
                   {"K", a.k},
                   {"sigma", a.sigma},
                   {"trials_ok", a.trials_ok},
                   {"trials_failed", a.trials_failed},
                   {"mae", summary_json(a.mae)},
                   {"mse", summary_json(a.mse)},
                   {"snr_db", summary_json(a.snr_db)},
                   {"per", summary_json(a.per)},
                   {"age", summary_json(a.age)},
                   {"iterations", summary_json(a.iterations)}});
  }
  return {{"aggregates", arr}};
}

void write_report(const fs::path& dir, const ExperimentReport& report) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("output directory does not exist: " + dir.string());
  }
  {
    std::ofstream out = open_out(dir / "rows.csv");
    write_rows_csv(out, report);
  }
  {
    std::ofstream out = open_out(dir / "timings.csv");
    write_timings_csv(out, report);
  }
  write_text(dir / "aggregates.json", aggregates_to_json(report).dump(2) + "\n");
}

}  // namespace bfcs::io
