#include "bfcs/harness.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "bfcs/errors.hpp"
#include "bfcs/projections.hpp"

namespace bfcs {

namespace {

std::uint64_t sigma_key(double sigma) { return std::bit_cast<std::uint64_t>(sigma); }

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) {
    s.mean = s.stddev = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

struct Cell {
  std::size_t k;
  double sigma;
  std::size_t trial;
};

std::vector<ExperimentRow> run_cell(const ExperimentConfig& config, const Cell& cell,
                                    const RunOptions& options) {
  const TrialData data = make_trial(config, cell.k, cell.sigma, cell.trial);
  const TrialSeeds seeds = trial_seeds(config.base_seed, cell.k, cell.sigma, cell.trial);
  const double tv_true = tv(data.x);

  std::vector<ExperimentRow> rows;
  std::vector<SignalEstimate> estimates;
  for (const AlgorithmSpec& spec : config.algorithms) {
    ExperimentRow row;
    row.algorithm = spec.label;
    row.k = cell.k;
    row.sigma = cell.sigma;
    row.trial = cell.trial;
    row.seed = seeds.noise.value;
    row.epsilon = std::numeric_limits<double>::quiet_NaN();

    SolverConfig sc;
    sc.algorithm = spec.algorithm;
    sc.objective = spec.objective;
    sc.tau = spec.tau.value_or(config.tau);
    sc.k = cell.k;
    sc.nonneg = spec.nonneg;
    sc.max_iter = config.max_iter;
    sc.tol = config.tol;

    const auto start = std::chrono::steady_clock::now();
    try {
      if (spec.start == StartPoint::kBackprojection) sc.x0 = backprojection_start(data.a, data.y);
      SolverResult result;
      if (spec.algorithm == Algorithm::kBfcs) {
        const std::optional<BfcsGrid>& grid = spec.grid ? spec.grid : config.bfcs_grid;
        if (grid) {
          std::vector<double> eps_list;
          for (double f : grid->eps_factor) eps_list.push_back(f * tv_true);
          sc.epsilon = eps_list.front();
          GridSearchResult best = grid_search_bfcs(data.a, data.y, data.x, grid->tau, eps_list, sc);
          sc.tau = best.tau;
          sc.epsilon = best.epsilon;
          result = std::move(best.result);
        } else {
          // Oracle budget: the TV of the true signal.
          sc.epsilon = tv_true;
          result = recover(data.a, data.y, sc);
        }
        row.epsilon = *sc.epsilon;
      } else {
        result = recover(data.a, data.y, sc);
      }
      row.tau = sc.tau;
      row.metrics = evaluate_metrics(data.x, result.x_hat);
      row.iterations = result.iterations;
      row.converged = result.converged;
      estimates.push_back({spec.label, result.x_hat});
    } catch (const DegenerateResult& e) {
      row.status = "degenerate";
      row.message = e.what();
      row.tau = sc.tau;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.metrics = {nan, nan, nan, nan, nan};
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    row.wall_time = std::max(elapsed.count(), 1e-9);
    rows.push_back(std::move(row));
  }

  if (options.dump_dir && cell.trial == options.dump_trial) {
    dump_recovered_signals(*options.dump_dir, cell.k, cell.sigma, cell.trial, data.x, estimates);
  }
  return rows;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n == 0 || m == 0) throw std::invalid_argument("n and m must be positive");
  if (k_list.empty()) throw std::invalid_argument("K_list must not be empty");
  if (sigma_list.empty()) throw std::invalid_argument("sigma_list must not be empty");
  if (algorithms.empty()) throw std::invalid_argument("algorithms must not be empty");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  for (double s : sigma_list) {
    if (!(s >= 0.0)) throw std::invalid_argument("noise levels must be >= 0");
  }
  for (std::size_t k : k_list) {
    SignalSpec spec = signal;
    spec.n = n;
    spec.k = k;
    spec.validate();
  }
  auto check_grid = [](const BfcsGrid& g) {
    if (g.tau.empty() || g.eps_factor.empty()) {
      throw std::invalid_argument("BFCS grid lists must not be empty");
    }
  };
  if (bfcs_grid) check_grid(*bfcs_grid);
  for (const AlgorithmSpec& a : algorithms) {
    if (a.label.empty()) throw std::invalid_argument("algorithm label must not be empty");
    if (a.grid) check_grid(*a.grid);
  }
}

std::vector<AlgorithmSpec> default_algorithms() {
  return {
      {"BIHT", Algorithm::kBiht, ObjectiveKind::kOneSidedL1, 1.0, StartPoint::kZero, false, {}},
      {"BIHT-l2", Algorithm::kBiht, ObjectiveKind::kOneSidedL2, 1e-3, StartPoint::kBackprojection,
       false, {}},
      {"BFCS", Algorithm::kBfcs, ObjectiveKind::kOneSidedL1, {}, StartPoint::kZero, false, {}},
      {"BFCS-l2", Algorithm::kBfcs, ObjectiveKind::kOneSidedL2, {}, StartPoint::kBackprojection,
       false, {}},
  };
}

TrialSeeds trial_seeds(RngSeed base, std::size_t k, double sigma, std::size_t trial) {
  return {
      derive_seed(base, {static_cast<std::uint64_t>(Stream::kMatrix), trial}),
      derive_seed(base, {static_cast<std::uint64_t>(Stream::kSignal), k, trial}),
      derive_seed(base, {static_cast<std::uint64_t>(Stream::kNoise), k, sigma_key(sigma), trial}),
  };
}

TrialData make_trial(const ExperimentConfig& config, std::size_t k, double sigma,
                     std::size_t trial) {
  const TrialSeeds seeds = trial_seeds(config.base_seed, k, sigma, trial);
  SignalSpec spec = config.signal;
  spec.n = config.n;
  spec.k = k;
  TrialData data;
  data.a = gaussian_matrix(config.m, config.n, seeds.matrix);
  const Vector raw = generate_raw_signal(spec, seeds.signal);
  data.x = normalize(raw);
  // sign(A xbar + w) = sign(A x + w / ||xbar||).
  const Vector& measured = config.noise_reference == NoiseReference::kUnnormalized ? raw : data.x;
  data.y = measure(data.a, measured, NoiseSpec{sigma}, seeds.noise);
  return data;
}

const AggregateRow* ExperimentReport::find(const std::string& algorithm, std::size_t k,
                                           double sigma) const {
  for (const AggregateRow& a : aggregates) {
    if (a.algorithm == algorithm && a.k == k && a.sigma == sigma) return &a;
  }
  return nullptr;
}

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRow>& rows) {
  // Keyed by first appearance so aggregates follow the row order.
  std::vector<AggregateRow> out;
  std::map<std::tuple<std::string, std::size_t, double>, std::size_t> index;
  std::vector<std::array<std::vector<double>, 6>> samples;
  for (const ExperimentRow& r : rows) {
    const auto key = std::make_tuple(r.algorithm, r.k, r.sigma);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      AggregateRow a;
      a.algorithm = r.algorithm;
      a.k = r.k;
      a.sigma = r.sigma;
      out.push_back(a);
      samples.emplace_back();
    }
    AggregateRow& a = out[it->second];
    if (r.status != "ok") {
      ++a.trials_failed;
      continue;
    }
    ++a.trials_ok;
    auto& s = samples[it->second];
    s[0].push_back(r.metrics.mae);
    s[1].push_back(r.metrics.mse);
    s[2].push_back(r.metrics.snr_db);
    s[3].push_back(r.metrics.per);
    s[4].push_back(r.metrics.age);
    s[5].push_back(static_cast<double>(r.iterations));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].mae = summarize(samples[i][0]);
    out[i].mse = summarize(samples[i][1]);
    out[i].snr_db = summarize(samples[i][2]);
    out[i].per = summarize(samples[i][3]);
    out[i].age = summarize(samples[i][4]);
    out[i].iterations = summarize(samples[i][5]);
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  if (options.dump_dir && !std::filesystem::is_directory(*options.dump_dir)) {
    throw std::runtime_error("output directory does not exist: " + options.dump_dir->string());
  }
  std::vector<Cell> cells;
  for (std::size_t k : config.k_list) {
    for (double sigma : config.sigma_list) {
      for (std::size_t t = 0; t < config.trials; ++t) cells.push_back({k, sigma, t});
    }
  }

  std::vector<std::vector<ExperimentRow>> slots(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        slots[i] = run_cell(config, cells[i], options);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentReport report;
  for (auto& slot : slots) {
    for (auto& row : slot) report.rows.push_back(std::move(row));
  }
  report.aggregates = aggregate(report.rows);
  return report;
}

GridSearchResult grid_search_bfcs(const SensingMatrix& a, const SignObservations& y,
                                  std::span<const double> x_true,
                                  const std::vector<double>& tau_list,
                                  const std::vector<double>& eps_list,
                                  const SolverConfig& base_config) {
  if (tau_list.empty() || eps_list.empty()) {
    throw std::invalid_argument("grid search needs non-empty tau and epsilon lists");
  }
  std::optional<GridSearchResult> best;
  std::string last_error;
  for (double tau : tau_list) {
    for (double eps : eps_list) {
      SolverConfig c = base_config;
      c.algorithm = Algorithm::kBfcs;
      c.tau = tau;
      c.epsilon = eps;
      try {
        SolverResult r = recover(a, y, c);
        const double snr = snr_db(x_true, r.x_hat);
        if (!best || snr > best->snr_db) best = GridSearchResult{tau, eps, snr, std::move(r)};
      } catch (const DegenerateResult& e) {
        last_error = e.what();
      }
    }
  }
  if (!best) throw DegenerateResult("every grid candidate failed: " + last_error);
  return std::move(*best);
}

std::vector<std::filesystem::path> dump_recovered_signals(
    const std::filesystem::path& dir, std::size_t k, double sigma, std::size_t trial,
    std::span<const double> x_true, const std::vector<SignalEstimate>& estimates) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("output directory does not exist: " + dir.string());
  }
  std::vector<std::filesystem::path> written;
  for (const SignalEstimate& est : estimates) {
    if (est.values.size() != x_true.size()) {
      throw DimensionError("estimate for " + est.algorithm + " has wrong length");
    }
    const std::filesystem::path path =
        dir / ("signals_K" + std::to_string(k) + "_sigma" + format_number(sigma) + "_trial" +
               std::to_string(trial) + "_" + est.algorithm + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.precision(17);
    out << "index,true_value,estimate\n";
    for (std::size_t i = 0; i < x_true.size(); ++i) {
      out << i << ',' << x_true[i] << ',' << est.values[i] << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace bfcs
