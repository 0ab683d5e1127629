#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bfcs/harness.hpp"
#include "bfcs/metrics.hpp"
#include "bfcs/sensing.hpp"
#include "bfcs/solvers.hpp"

namespace bfcs::io {

using Json = nlohmann::json;

/// Magic prefix of the binary matrix format; followed by little-endian u64
/// rows, u64 cols and rows * cols little-endian f64 entries, row-major.
inline constexpr std::array<char, 8> kMatrixMagic{'B', 'F', 'C', 'S', 'M', 'A', 'T', '1'};

// All readers and writers throw std::runtime_error naming the file on I/O or
// parse failures.

void write_matrix(const std::filesystem::path& path, const SensingMatrix& a);
SensingMatrix read_matrix(const std::filesystem::path& path);

/// One value per line, printed with 17 significant digits.
void write_vector_csv(const std::filesystem::path& path, std::span<const double> v);
Vector read_vector_csv(const std::filesystem::path& path);

/// {"n": ..., "values": [...]}
Json signal_to_json(std::span<const double> v);
Vector signal_from_json(const Json& j);
/// {"m": ..., "signs": [...]}
Json observations_to_json(const SignObservations& y);
SignObservations observations_from_json(const Json& j);

void write_observations_csv(const std::filesystem::path& path, const SignObservations& y);
SignObservations read_observations_csv(const std::filesystem::path& path);

/// Dispatch on extension: ".json" uses the envelope, anything else CSV.
void write_signal(const std::filesystem::path& path, std::span<const double> v);
Vector read_signal(const std::filesystem::path& path);
void write_observations(const std::filesystem::path& path, const SignObservations& y);
SignObservations read_observations(const std::filesystem::path& path);

/// Field names: algorithm, objective, tau, K, epsilon, nonneg, max_iter, tol, x0.
/// Absent fields keep SolverConfig defaults; epsilon and x0 may be null.
Json solver_config_to_json(const SolverConfig& c);
SolverConfig solver_config_from_json(const Json& j);

/// Header: iteration,objective,hamming,rel_change
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);

Json experiment_config_to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const Json& j);
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

/// "algorithm,K,sigma,seed,mae,mse,snr_db,per,age"
std::string metric_csv_header();
std::string metric_csv_row(const std::string& algorithm, std::size_t k, double sigma,
                           std::uint64_t seed, const MetricReport& m);

/// Deterministic per-row table: the metric columns followed by trial,
/// iterations, converged, tau, epsilon and status. Wall times are excluded.
void write_rows_csv(std::ostream& out, const ExperimentReport& report);
/// algorithm,K,sigma,trial,wall_time
void write_timings_csv(std::ostream& out, const ExperimentReport& report);
Json aggregates_to_json(const ExperimentReport& report);

/// Writes rows.csv, aggregates.json and timings.csv into dir.
void write_report(const std::filesystem::path& dir, const ExperimentReport& report);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bfcs::io
