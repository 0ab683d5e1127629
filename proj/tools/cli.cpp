#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bfcs/errors.hpp"
#include "bfcs/harness.hpp"
#include "bfcs/io.hpp"
#include "bfcs/metrics.hpp"
#include "bfcs/projections.hpp"
#include "bfcs/sensing.hpp"
#include "bfcs/solvers.hpp"

namespace bfcs::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_config(std::ostream& err, const std::string& command, const Json& config) {
  err << "# " << command << " config: " << config.dump() << '\n';
}

StartPoint parse_start(const std::string& s) {
  if (s == "zero") return StartPoint::kZero;
  if (s == "backprojection") return StartPoint::kBackprojection;
  throw UsageError("--start must be 'zero' or 'backprojection'");
}

struct GenMatrixArgs {
  std::size_t m = 1000;
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  std::string out;
};

struct GenSignalArgs {
  SignalSpec spec;
  std::uint64_t seed = 0;
  bool raw = false;
  std::string out;
};

struct MeasureArgs {
  std::string matrix, signal, out;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct RecoverArgs {
  std::string matrix, obs, config, x0, out, trace;
  std::string algorithm = "BIHT";
  std::string objective = "l1";
  std::string start = "zero";
  double tau = 1.0;
  std::size_t k = 100;
  double eps = 0.0;
  bool nonneg = false;
  std::size_t max_iter = 300;
  double tol = 1e-3;
};

struct MetricsArgs {
  std::string truth, estimate, out;
  std::string algorithm = "estimate";
  std::size_t k = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct BenchArgs {
  std::string config, out;
  std::size_t jobs = 1;
  std::size_t trials = 0;
  std::size_t dump_trial = 0;
  bool no_dump = false;
};

struct GridArgs {
  std::string matrix, obs, truth, out;
  std::vector<double> taus{1.0};
  std::vector<double> eps;
  std::vector<double> eps_factors;
  std::string objective = "l1";
  std::string start = "zero";
  std::size_t k = 100;
  std::size_t max_iter = 300;
  double tol = 1e-3;
  bool nonneg = false;
};

int gen_matrix(const GenMatrixArgs& a, std::ostream& err) {
  print_config(err, "gen-matrix", {{"m", a.m}, {"n", a.n}, {"seed", a.seed}, {"out", a.out}});
  io::write_matrix(a.out, gaussian_matrix(a.m, a.n, RngSeed{a.seed}));
  return 0;
}

int gen_signal(const GenSignalArgs& a, std::ostream& err) {
  print_config(err, "gen-signal",
               {{"n", a.spec.n},
                {"k", a.spec.k},
                {"seed", a.seed},
                {"pos_level", a.spec.positive_level},
                {"neg_level", a.spec.negative_level},
                {"jitter", a.spec.jitter_std},
                {"pos_starts", a.spec.positive_starts},
                {"neg_starts", a.spec.negative_starts},
                {"raw", a.raw},
                {"out", a.out}});
  const Vector x = a.raw ? generate_raw_signal(a.spec, RngSeed{a.seed})
                         : generate_signal(a.spec, RngSeed{a.seed});
  io::write_signal(a.out, x);
  return 0;
}

int measure_cmd(const MeasureArgs& a, std::ostream& err) {
  print_config(err, "measure",
               {{"matrix", a.matrix}, {"signal", a.signal}, {"sigma", a.sigma}, {"seed", a.seed},
                {"out", a.out}});
  const SensingMatrix A = io::read_matrix(a.matrix);
  const Vector x = io::read_signal(a.signal);
  io::write_observations(a.out, measure(A, x, NoiseSpec{a.sigma}, RngSeed{a.seed}));
  return 0;
}

int recover_cmd(const RecoverArgs& a, const CLI::App& sub, std::ostream& out,
                std::ostream& err) {
  SolverConfig config;
  if (!a.config.empty()) {
    config = io::solver_config_from_json(Json::parse(io::read_text(a.config)));
  } else {
    config.k = a.k;
  }
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--algorithm") || a.config.empty()) config.algorithm = algorithm_from_string(a.algorithm);
  if (given("--objective") || a.config.empty()) config.objective = objective_from_string(a.objective);
  if (given("--tau") || a.config.empty()) config.tau = a.tau;
  if (given("--k")) config.k = a.k;
  if (given("--eps")) config.epsilon = a.eps;
  if (given("--nonneg")) config.nonneg = a.nonneg;
  if (given("--max-iter") || a.config.empty()) config.max_iter = a.max_iter;
  if (given("--tol") || a.config.empty()) config.tol = a.tol;
  if (config.algorithm == Algorithm::kBiht) config.epsilon.reset();
  if (config.algorithm == Algorithm::kBfcs && !config.epsilon) {
    throw UsageError("BFCS needs --eps (or epsilon in --config)");
  }

  const SensingMatrix A = io::read_matrix(a.matrix);
  const SignObservations y = io::read_observations(a.obs);
  if (y.size() != A.rows()) {
    throw DimensionError("matrix " + a.matrix + " is " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()) + " but observations " + a.obs + " have " +
                         std::to_string(y.size()) + " signs");
  }
  if (!a.x0.empty()) {
    config.x0 = io::read_signal(a.x0);
  } else if (parse_start(a.start) == StartPoint::kBackprojection) {
    config.x0 = backprojection_start(A, y);
  }
  config.validate();

  Json shown = io::solver_config_to_json(config);
  if (config.x0) shown["x0"] = a.x0.empty() ? a.start : a.x0;
  print_config(err, "recover", shown);

  const SolverResult result = recover(A, y, config);
  io::write_signal(a.out, result.x_hat);
  if (!a.trace.empty()) {
    std::ofstream t(a.trace);
    if (!t) throw std::runtime_error("cannot open " + a.trace + " for writing");
    io::write_trace_csv(t, result.trace);
  }
  out << Json{{"iterations", result.iterations},
              {"converged", result.converged},
              {"final_hamming", result.trace.empty() ? Json(nullptr) : Json(result.trace.back().hamming)},
              {"tv", tv(result.x_hat)}}
             .dump()
      << '\n';
  return 0;
}

int metrics_cmd(const MetricsArgs& a, std::ostream& out, std::ostream& err) {
  print_config(err, "metrics",
               {{"truth", a.truth}, {"estimate", a.estimate}, {"algorithm", a.algorithm},
                {"k", a.k}, {"sigma", a.sigma}, {"seed", a.seed}});
  const Vector x = io::read_signal(a.truth);
  const Vector e = io::read_signal(a.estimate);
  const std::string text = io::metric_csv_header() + "\n" +
                           io::metric_csv_row(a.algorithm, a.k, a.sigma, a.seed,
                                              evaluate_metrics(x, e)) +
                           "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    io::write_text(a.out, text);
  }
  return 0;
}

int bench_cmd(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  if (a.config.empty()) {
    config.algorithms = default_algorithms();
  } else {
    config = io::read_experiment_config(a.config);
  }
  if (a.trials > 0) config.trials = a.trials;
  config.validate();
  if (!fs::is_directory(a.out)) {
    throw std::runtime_error("output directory does not exist: " + a.out);
  }
  Json shown = io::experiment_config_to_json(config);
  shown["jobs"] = a.jobs;
  print_config(err, "bench", shown);

  RunOptions options;
  options.jobs = a.jobs;
  if (!a.no_dump) {
    options.dump_dir = fs::path(a.out);
    options.dump_trial = a.dump_trial;
  }
  const ExperimentReport report = run_experiment(config, options);
  io::write_report(a.out, report);

  out << "algorithm,K,sigma,ok,snr_db_mean,snr_db_std,per_mean,age_mean\n";
  for (const AggregateRow& r : report.aggregates) {
    out << r.algorithm << ',' << r.k << ',' << r.sigma << ',' << r.trials_ok << ','
        << r.snr_db.mean << ',' << r.snr_db.stddev << ',' << r.per.mean << ',' << r.age.mean
        << '\n';
  }
  return 0;
}

int grid_cmd(const GridArgs& a, std::ostream& out, std::ostream& err) {
  if (a.eps.empty() == a.eps_factors.empty()) {
    throw UsageError("grid-search needs exactly one of --eps or --eps-factors");
  }
  const SensingMatrix A = io::read_matrix(a.matrix);
  const SignObservations y = io::read_observations(a.obs);
  const Vector x = io::read_signal(a.truth);
  if (y.size() != A.rows() || x.size() != A.cols()) {
    throw DimensionError("matrix is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                         ", observations have " + std::to_string(y.size()) +
                         " signs, truth has " + std::to_string(x.size()) + " entries");
  }
  std::vector<double> eps = a.eps;
  for (double f : a.eps_factors) eps.push_back(f * tv(x));

  SolverConfig base;
  base.algorithm = Algorithm::kBfcs;
  base.objective = objective_from_string(a.objective);
  base.k = a.k;
  base.max_iter = a.max_iter;
  base.tol = a.tol;
  base.nonneg = a.nonneg;
  base.epsilon = eps.front();
  if (parse_start(a.start) == StartPoint::kBackprojection) base.x0 = backprojection_start(A, y);

  print_config(err, "grid-search",
               {{"taus", a.taus}, {"eps", eps}, {"objective", to_string(base.objective)},
                {"k", a.k}, {"max_iter", a.max_iter}, {"tol", a.tol}, {"start", a.start},
                {"nonneg", a.nonneg}});
  const GridSearchResult best = grid_search_bfcs(A, y, x, a.taus, eps, base);
  if (!a.out.empty()) io::write_signal(a.out, best.result.x_hat);
  out << Json{{"tau", best.tau}, {"epsilon", best.epsilon}, {"snr_db", best.snr_db},
              {"iterations", best.result.iterations}}
             .dump()
      << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"1-bit compressive sensing recovery with BIHT and BFCS"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  GenMatrixArgs gm;
  auto* gen_matrix_cmd = app.add_subcommand("gen-matrix", "Write an i.i.d. N(0,1) sensing matrix");
  gen_matrix_cmd->add_option("--m", gm.m, "Rows (measurements)");
  gen_matrix_cmd->add_option("--n", gm.n, "Columns (signal length)");
  gen_matrix_cmd->add_option("--seed", gm.seed, "RNG seed");
  gen_matrix_cmd->add_option("--out", gm.out, "Output binary matrix file")->required();

  GenSignalArgs gs;
  auto* gen_signal_cmd = app.add_subcommand("gen-signal", "Write a sparse piecewise-smooth signal");
  gen_signal_cmd->add_option("--n", gs.spec.n, "Signal length");
  gen_signal_cmd->add_option("--k", gs.spec.k, "Sparsity (multiple of 4)");
  gen_signal_cmd->add_option("--seed", gs.seed, "RNG seed");
  gen_signal_cmd->add_option("--pos-level", gs.spec.positive_level, "Level of the positive blocks");
  gen_signal_cmd->add_option("--neg-level", gs.spec.negative_level, "Level of the negative blocks");
  gen_signal_cmd->add_option("--jitter", gs.spec.jitter_std, "Gaussian jitter std on block entries");
  gen_signal_cmd->add_option("--pos-starts", gs.spec.positive_starts, "Starts of the positive blocks")
      ->delimiter(',');
  gen_signal_cmd->add_option("--neg-starts", gs.spec.negative_starts, "Starts of the negative blocks")
      ->delimiter(',');
  gen_signal_cmd->add_flag("--raw", gs.raw, "Skip normalization");
  gen_signal_cmd->add_option("--out", gs.out, "Output file (.json envelope, else CSV)")->required();

  MeasureArgs ms;
  auto* measure_sub = app.add_subcommand("measure", "Compute y = sign(A x + w)");
  measure_sub->add_option("--matrix", ms.matrix, "Binary matrix file")->required();
  measure_sub->add_option("--signal", ms.signal, "Signal file")->required();
  measure_sub->add_option("--sigma", ms.sigma, "Noise standard deviation");
  measure_sub->add_option("--seed", ms.seed, "RNG seed for the noise");
  measure_sub->add_option("--out", ms.out, "Output observations (.json envelope, else CSV)")
      ->required();

  RecoverArgs rc;
  auto* recover_sub = app.add_subcommand("recover", "Recover a unit-norm signal with BIHT or BFCS");
  recover_sub->add_option("--matrix", rc.matrix, "Binary matrix file")->required();
  recover_sub->add_option("--obs", rc.obs, "Observations file")->required();
  recover_sub->add_option("--config", rc.config, "Solver config JSON; flags given explicitly override it");
  recover_sub->add_option("--algorithm", rc.algorithm, "BIHT or BFCS");
  recover_sub->add_option("--objective", rc.objective, "l1 or l2");
  recover_sub->add_option("--tau", rc.tau, "Step size");
  recover_sub->add_option("--k", rc.k, "Sparsity budget K");
  recover_sub->add_option("--eps", rc.eps, "TV budget (BFCS)");
  recover_sub->add_flag("--nonneg", rc.nonneg, "Project onto the nonnegative orthant each iteration");
  recover_sub->add_option("--max-iter", rc.max_iter, "Iteration cap");
  recover_sub->add_option("--tol", rc.tol, "Relative-change stopping threshold");
  recover_sub->add_option("--start", rc.start, "zero or backprojection");
  recover_sub->add_option("--x0", rc.x0, "Starting point file (overrides --start)");
  recover_sub->add_option("--out", rc.out, "Output estimate file")->required();
  recover_sub->add_option("--trace", rc.trace, "Iteration trace CSV");

  MetricsArgs mt;
  auto* metrics_sub = app.add_subcommand("metrics", "MAE, MSE, SNR, PER and AGE of an estimate");
  metrics_sub->add_option("--truth", mt.truth, "Reference signal file")->required();
  metrics_sub->add_option("--estimate", mt.estimate, "Estimated signal file")->required();
  metrics_sub->add_option("--algorithm", mt.algorithm, "Label for the CSV row");
  metrics_sub->add_option("--k", mt.k, "K for the CSV row");
  metrics_sub->add_option("--sigma", mt.sigma, "Noise level for the CSV row");
  metrics_sub->add_option("--seed", mt.seed, "Seed for the CSV row");
  metrics_sub->add_option("--out", mt.out, "Write the CSV here instead of stdout");

  BenchArgs bn;
  auto* bench_sub = app.add_subcommand("bench", "Run the experiment grid and write a report");
  bench_sub->add_option("--config", bn.config, "Experiment config JSON (default: built-in grid)");
  bench_sub->add_option("--out", bn.out, "Existing output directory")->required();
  bench_sub->add_option("--jobs", bn.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_sub->add_option("--trials", bn.trials, "Override trial count (0 keeps the config)");
  bench_sub->add_option("--dump-trial", bn.dump_trial, "Trial whose recovered signals are dumped");
  bench_sub->add_flag("--no-dump", bn.no_dump, "Do not dump recovered signals");

  GridArgs gr;
  auto* grid_sub = app.add_subcommand("grid-search", "Tune BFCS (tau, eps) for best SNR against the truth");
  grid_sub->add_option("--matrix", gr.matrix, "Binary matrix file")->required();
  grid_sub->add_option("--obs", gr.obs, "Observations file")->required();
  grid_sub->add_option("--truth", gr.truth, "True signal file")->required();
  grid_sub->add_option("--taus", gr.taus, "Step sizes")->delimiter(',');
  grid_sub->add_option("--eps", gr.eps, "Absolute TV budgets")->delimiter(',');
  grid_sub->add_option("--eps-factors", gr.eps_factors, "TV budgets as multiples of TV(truth)")
      ->delimiter(',');
  grid_sub->add_option("--objective", gr.objective, "l1 or l2");
  grid_sub->add_option("--start", gr.start, "zero or backprojection");
  grid_sub->add_option("--k", gr.k, "Sparsity budget K");
  grid_sub->add_option("--max-iter", gr.max_iter, "Iteration cap");
  grid_sub->add_option("--tol", gr.tol, "Relative-change stopping threshold");
  grid_sub->add_flag("--nonneg", gr.nonneg, "Nonnegativity projection");
  grid_sub->add_option("--out", gr.out, "Write the best estimate here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*gen_matrix_cmd) return gen_matrix(gm, err);
    if (*gen_signal_cmd) return gen_signal(gs, err);
    if (*measure_sub) return measure_cmd(ms, err);
    if (*recover_sub) return recover_cmd(rc, *recover_sub, out, err);
    if (*metrics_sub) return metrics_cmd(mt, out, err);
    if (*bench_sub) return bench_cmd(bn, out, err);
    if (*grid_sub) return grid_cmd(gr, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace bfcs::cli
