#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bfcs/metrics.hpp"
#include "bfcs/rng.hpp"
#include "bfcs/sensing.hpp"
#include "bfcs/solvers.hpp"

namespace bfcs {

enum class StartPoint {
  kZero,            ///< x0 = 0
  kBackprojection,  ///< x0 = A^T y / ||A^T y||
};

/// Which signal the additive noise is compared against when measuring.
enum class NoiseReference {
  /// y = sign(A xbar + w): noise added to the block signal before it is
  /// normalized. This is the default.
  kUnnormalized,
  /// y = sign(A x + w) with the unit-norm x.
  kNormalized,
};

/// Oracle tuning grid for BFCS. Budgets are multiples of TV(x_true).
struct BfcsGrid {
  std::vector<double> tau;
  std::vector<double> eps_factor;
};

struct AlgorithmSpec {
  std::string label;
  Algorithm algorithm = Algorithm::kBiht;
  ObjectiveKind objective = ObjectiveKind::kOneSidedL1;
  /// Step size; falls back to ExperimentConfig::tau.
  std::optional<double> tau;
  StartPoint start = StartPoint::kZero;
  bool nonneg = false;
  /// BFCS only: overrides ExperimentConfig::bfcs_grid for this algorithm.
  std::optional<BfcsGrid> grid;
};

struct ExperimentConfig {
  std::size_t n = 2000;
  std::size_t m = 1000;
  std::vector<std::size_t> k_list{100, 400};
  std::vector<double> sigma_list{1.0, 4.0};
  std::vector<AlgorithmSpec> algorithms;
  std::size_t trials = 10;
  RngSeed base_seed{2013};
  double tau = 1.0;
  double tol = 1e-3;
  std::size_t max_iter = 300;
  NoiseReference noise_reference = NoiseReference::kUnnormalized;
  std::optional<BfcsGrid> bfcs_grid;
  /// Block layout and levels; n and K are overwritten per cell.
  SignalSpec signal;

  /// Throws std::invalid_argument on empty lists, trials == 0 or an invalid
  /// signal layout for any K.
  void validate() const;
};

/// The four solver variants of the n = 2000 comparison with their default
/// step sizes and starting points.
std::vector<AlgorithmSpec> default_algorithms();

struct TrialSeeds {
  RngSeed matrix;
  RngSeed signal;
  RngSeed noise;
};

/// Substream seeds for one (K, sigma, trial) cell. The matrix depends on the
/// trial only, the signal on (K, trial) and the noise on (K, sigma, trial).
TrialSeeds trial_seeds(RngSeed base, std::size_t k, double sigma, std::size_t trial);

struct ExperimentRow {
  std::string algorithm;
  std::size_t k = 0;
  double sigma = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  /// "ok" or a short error tag ("degenerate", ...).
  std::string status = "ok";
  std::string message;
  MetricReport metrics;
  std::size_t iterations = 0;
  bool converged = false;
  double tau = 0.0;
  /// TV budget actually used (BFCS), NaN otherwise.
  double epsilon = 0.0;
  double wall_time = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

struct AggregateRow {
  std::string algorithm;
  std::size_t k = 0;
  double sigma = 0.0;
  std::size_t trials_ok = 0;
  std::size_t trials_failed = 0;
  MetricSummary mae, mse, snr_db, per, age, iterations;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<AggregateRow> aggregates;

  /// Aggregate row for one cell, or nullptr.
  const AggregateRow* find(const std::string& algorithm, std::size_t k, double sigma) const;
};

/// Generated data for one cell and trial.
struct TrialData {
  SensingMatrix a;
  Vector x;
  SignObservations y;
};

TrialData make_trial(const ExperimentConfig& config, std::size_t k, double sigma,
                     std::size_t trial);

/// Mean and sample standard deviation (n - 1) over ok rows, per cell.
std::vector<AggregateRow> aggregate(const std::vector<ExperimentRow>& rows);

struct RunOptions {
  /// Worker threads; rows are assembled by key so the result does not depend
  /// on this.
  std::size_t jobs = 1;
  /// If set, recovered signals of trial `dump_trial` are written here.
  std::optional<std::filesystem::path> dump_dir;
  std::size_t dump_trial = 0;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct GridSearchResult {
  double tau = 0.0;
  double epsilon = 0.0;
  double snr_db = 0.0;
  SolverResult result;
};

/// Exhaustive BFCS search maximizing SNR against x_true. The first candidate
/// (tau outer, eps inner) wins ties. Candidates whose solve fails are skipped;
/// throws DegenerateResult if every candidate fails and std::invalid_argument
/// on empty lists.
GridSearchResult grid_search_bfcs(const SensingMatrix& a, const SignObservations& y,
                                  std::span<const double> x_true,
                                  const std::vector<double>& tau_list,
                                  const std::vector<double>& eps_list,
                                  const SolverConfig& base_config);

struct SignalEstimate {
  std::string algorithm;
  Vector values;
};

/// Writes one CSV per algorithm (index,true_value,estimate) named
/// signals_K<k>_sigma<s>_trial<t>_<algorithm>.csv. Returns the files written;
/// throws std::runtime_error naming the path on I/O failure.
std::vector<std::filesystem::path> dump_recovered_signals(
    const std::filesystem::path& dir, std::size_t k, double sigma, std::size_t trial,
    std::span<const double> x_true, const std::vector<SignalEstimate>& estimates);

}  // namespace bfcs
