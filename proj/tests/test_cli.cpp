#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "bfcs/io.hpp"
#include "bfcs/solvers.hpp"
#include "cli.hpp"
#include "test_paths.hpp"

namespace bfcs {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bfcs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(Cli, GenSignalIsDeterministic) {
  const fs::path dir = test_temp_dir("cli_signal");
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  ASSERT_EQ(run_cli({"gen-signal", "--n", "2000", "--k", "100", "--seed", "7", "--out", a}).code, 0);
  ASSERT_EQ(run_cli({"gen-signal", "--n", "2000", "--k", "100", "--seed", "7", "--out", b}).code, 0);
  EXPECT_EQ(io::read_text(a), io::read_text(b));
  EXPECT_EQ(io::read_signal(a).size(), 2000u);
}

TEST(Cli, PrintsResolvedConfig) {
  const fs::path dir = test_temp_dir("cli_config");
  const CliResult r =
      run_cli({"gen-matrix", "--m", "3", "--n", "2", "--out", (dir / "a.bin").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("gen-matrix config"), std::string::npos) << r.err;
}

TEST(Cli, RecoverDimensionMismatch) {
  const fs::path dir = test_temp_dir("cli_mismatch");
  const std::string a = (dir / "a.bin").string(), y = (dir / "y.csv").string();
  ASSERT_EQ(run_cli({"gen-matrix", "--m", "30", "--n", "12", "--seed", "1", "--out", a}).code, 0);
  io::write_observations(y, SignObservations({1, -1, 1, 1, -1}));
  const CliResult r =
      run_cli({"recover", "--matrix", a, "--obs", y, "--k", "2", "--out", (dir / "x.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("30"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("5"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({"gen-signal", "--bogus", "1", "--out", "x.csv"}).code, 1);
  EXPECT_EQ(run_cli({"gen-matrix", "--m", "3"}).code, 1);  // missing --out
  EXPECT_EQ(run_cli({"nonexistent"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST(Cli, RuntimeErrors) {
  const fs::path dir = test_temp_dir("cli_runtime");
  const CliResult r = run_cli({"recover", "--matrix", (dir / "none.bin").string(), "--obs",
                               (dir / "none.csv").string(), "--out", (dir / "x.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("none.bin"), std::string::npos) << r.err;
}

TEST(Cli, HelpShowsDefaults) {
  const CliResult r = run_cli({"recover", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--tau", "--k", "--eps", "--max-iter", "--tol", "--start", "--nonneg"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_NE(r.out.find("300"), std::string::npos) << r.out;    // max-iter default
  EXPECT_NE(r.out.find("0.001"), std::string::npos) << r.out;  // tol default
  const CliResult g = run_cli({"gen-signal", "--help"});
  EXPECT_NE(g.out.find("2000"), std::string::npos) << g.out;
  EXPECT_NE(g.out.find("0.05"), std::string::npos) << g.out;
}

TEST(Cli, FileRoundTripMatchesInMemory) {
  const fs::path dir = test_temp_dir("cli_roundtrip");
  const std::string a = (dir / "a.bin").string(), x = (dir / "x.csv").string(),
                    y = (dir / "y.json").string(), est = (dir / "est.csv").string(),
                    trace = (dir / "trace.csv").string();
  ASSERT_EQ(run_cli({"gen-matrix", "--m", "80", "--n", "120", "--seed", "4", "--out", a}).code, 0);
  ASSERT_EQ(run_cli({"gen-signal", "--n", "120", "--k", "16", "--seed", "5", "--pos-starts",
                     "10,40", "--neg-starts", "70,100", "--out", x})
                .code,
            0);
  ASSERT_EQ(run_cli({"measure", "--matrix", a, "--signal", x, "--sigma", "0.2", "--seed", "6",
                     "--out", y})
                .code,
            0);
  const CliResult r = run_cli({"recover", "--matrix", a, "--obs", y, "--algorithm", "BFCS",
                               "--k", "16", "--tau", "0.01", "--eps", "0.02", "--out", est,
                               "--trace", trace});
  ASSERT_EQ(r.code, 0) << r.err;

  const SensingMatrix am = gaussian_matrix(80, 120, RngSeed{4});
  SignalSpec spec;
  spec.n = 120;
  spec.k = 16;
  spec.positive_starts = {10, 40};
  spec.negative_starts = {70, 100};
  const Vector xm = generate_signal(spec, RngSeed{5});
  const SignObservations ym = measure(am, xm, NoiseSpec{0.2}, RngSeed{6});
  EXPECT_EQ(io::read_matrix(a), am);
  EXPECT_EQ(io::read_signal(x), xm);
  EXPECT_EQ(io::read_observations(y), ym);
  SolverConfig c;
  c.algorithm = Algorithm::kBfcs;
  c.k = 16;
  c.tau = 0.01;
  c.epsilon = 0.02;
  const SolverResult res = recover(am, ym, c);
  EXPECT_EQ(io::read_signal(est), res.x_hat);

  std::ostringstream expected_trace;
  io::write_trace_csv(expected_trace, res.trace);
  EXPECT_EQ(io::read_text(trace), expected_trace.str());

  const CliResult m = run_cli({"metrics", "--truth", x, "--estimate", est, "--algorithm", "BFCS"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(m.out.rfind(io::metric_csv_header(), 0), 0u) << m.out;
}

TEST(Cli, RecoverReadsSolverConfig) {
  const fs::path dir = test_temp_dir("cli_solver_config");
  const std::string a = (dir / "a.bin").string(), y = (dir / "y.csv").string(),
                    cfg = (dir / "cfg.json").string();
  ASSERT_EQ(run_cli({"gen-matrix", "--m", "50", "--n", "8", "--seed", "2", "--out", a}).code, 0);
  const SensingMatrix am = io::read_matrix(a);
  const SignObservations ym = measure(am, Vector{1, 0, 0, -1, 0, 0, 0, 0}, NoiseSpec{0.0}, RngSeed{0});
  io::write_observations(y, ym);
  io::write_text(cfg, R"({"algorithm": "BIHT", "K": 2, "tau": 1.0})");
  const CliResult r =
      run_cli({"recover", "--matrix", a, "--obs", y, "--config", cfg, "--out", (dir / "e.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  SolverConfig c;
  c.k = 2;
  EXPECT_EQ(io::read_signal(dir / "e.csv"), recover(am, ym, c).x_hat);
}

TEST(Cli, GridSearch) {
  const fs::path dir = test_temp_dir("cli_grid");
  const std::string a = (dir / "a.bin").string(), x = (dir / "x.csv").string(),
                    y = (dir / "y.csv").string();
  ASSERT_EQ(run_cli({"gen-matrix", "--m", "80", "--n", "120", "--seed", "4", "--out", a}).code, 0);
  ASSERT_EQ(run_cli({"gen-signal", "--n", "120", "--k", "16", "--seed", "5", "--pos-starts",
                     "10,40", "--neg-starts", "70,100", "--out", x})
                .code,
            0);
  ASSERT_EQ(run_cli({"measure", "--matrix", a, "--signal", x, "--sigma", "0.2", "--out", y}).code, 0);
  const CliResult r = run_cli({"grid-search", "--matrix", a, "--obs", y, "--truth", x, "--k",
                               "16", "--taus", "0.01", "--eps-factors", "0.5,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("snr_db"), std::string::npos) << r.out;
}

TEST(Cli, SmallBench) {
  const fs::path dir = test_temp_dir("cli_bench");
  const std::string cfg = (dir / "cfg.json").string();
  io::write_text(cfg, R"({
    "n": 120, "m": 80, "K_list": [16], "sigma_list": [1.0], "trials": 2, "base_seed": 3,
    "signal": {"positive_starts": [10, 40], "negative_starts": [70, 100]},
    "bfcs_grid": {"tau": [0.01], "eps_factor": [0.5, 1.0]}
  })");
  const fs::path out = dir / "out";
  fs::create_directories(out);
  const CliResult r = run_cli({"bench", "--config", cfg, "--out", out.string(), "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "rows.csv"));
  EXPECT_TRUE(fs::exists(out / "aggregates.json"));
  std::istringstream rows(io::read_text(out / "rows.csv"));
  std::size_t lines = 0;
  for (std::string line; std::getline(rows, line);) ++lines;
  EXPECT_EQ(lines, 1u + 4u * 2u);

  EXPECT_EQ(run_cli({"bench", "--config", cfg, "--out", (dir / "missing").string()}).code, 2);
}

}  // namespace
}  // namespace bfcs
