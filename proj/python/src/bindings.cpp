#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "bfcs/errors.hpp"
#include "bfcs/harness.hpp"
#include "bfcs/io.hpp"
#include "bfcs/metrics.hpp"
#include "bfcs/objectives.hpp"
#include "bfcs/projections.hpp"
#include "bfcs/sensing.hpp"
#include "bfcs/solvers.hpp"

namespace py = pybind11;
using namespace bfcs;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using SignArray = py::array_t<std::int8_t, py::array::c_style | py::array::forcecast>;

Vector to_vector(const DoubleArray& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-D array");
  return Vector(a.data(), a.data() + a.size());
}

DoubleArray to_array(const Vector& v) {
  DoubleArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SensingMatrix to_matrix(const DoubleArray& a) {
  if (a.ndim() != 2) throw DimensionError("sensing matrix must be a 2-D array");
  const auto m = static_cast<std::size_t>(a.shape(0));
  const auto n = static_cast<std::size_t>(a.shape(1));
  return SensingMatrix(m, n, std::vector<double>(a.data(), a.data() + a.size()));
}

DoubleArray matrix_to_array(const SensingMatrix& a) {
  DoubleArray out({static_cast<py::ssize_t>(a.rows()), static_cast<py::ssize_t>(a.cols())});
  std::copy(a.entries().begin(), a.entries().end(), out.mutable_data());
  return out;
}

SignObservations to_signs(const SignArray& y) {
  if (y.ndim() != 1) throw DimensionError("observations must be a 1-D array");
  return SignObservations(std::vector<std::int8_t>(y.data(), y.data() + y.size()));
}

SignArray signs_to_array(const SignObservations& y) {
  SignArray out(static_cast<py::ssize_t>(y.size()));
  std::copy(y.signs().begin(), y.signs().end(), out.mutable_data());
  return out;
}

py::dict result_to_dict(const SolverResult& r) {
  std::vector<double> objective, rel_change, tv_values;
  std::vector<std::size_t> hamming, nonzeros;
  for (const IterationRecord& rec : r.trace) {
    objective.push_back(rec.objective);
    rel_change.push_back(rec.rel_change);
    tv_values.push_back(rec.tv);
    hamming.push_back(rec.hamming);
    nonzeros.push_back(rec.nonzeros);
  }
  py::dict trace;
  trace["objective"] = to_array(objective);
  trace["hamming"] = py::array(py::cast(hamming));
  trace["rel_change"] = to_array(rel_change);
  trace["tv"] = to_array(tv_values);
  trace["nonzeros"] = py::array(py::cast(nonzeros));
  py::dict d;
  d["x_hat"] = to_array(r.x_hat);
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["trace"] = trace;
  return d;
}

py::dict metrics_to_dict(const MetricReport& m) {
  py::dict d;
  d["mae"] = m.mae;
  d["mse"] = m.mse;
  d["snr_db"] = m.snr_db;
  d["per"] = m.per;
  d["age"] = m.age;
  return d;
}

SolverConfig make_config(const std::string& algorithm, const std::string& objective, double tau,
                         std::size_t k, std::optional<double> epsilon, bool nonneg,
                         std::size_t max_iter, double tol, std::optional<DoubleArray> x0) {
  SolverConfig c;
  c.algorithm = algorithm_from_string(algorithm);
  c.objective = objective_from_string(objective);
  c.tau = tau;
  c.k = k;
  c.epsilon = epsilon;
  c.nonneg = nonneg;
  c.max_iter = max_iter;
  c.tol = tol;
  if (x0) c.x0 = to_vector(*x0);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "1-bit compressive sensing recovery with BIHT and BFCS";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DegenerateResult>(m, "DegenerateResult", PyExc_RuntimeError);

  m.def(
      "gaussian_matrix",
      [](std::size_t rows, std::size_t cols, std::uint64_t seed) {
        return matrix_to_array(gaussian_matrix(rows, cols, RngSeed{seed}));
      },
      py::arg("m"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "generate_signal",
      [](std::size_t n, std::size_t k, std::uint64_t seed, double positive_level,
         double negative_level, double jitter_std, std::array<std::size_t, 2> positive_starts,
         std::array<std::size_t, 2> negative_starts, bool raw) {
        SignalSpec spec{n, k, positive_level, negative_level, jitter_std, positive_starts,
                        negative_starts};
        return to_array(raw ? generate_raw_signal(spec, RngSeed{seed})
                            : generate_signal(spec, RngSeed{seed}));
      },
      py::arg("n") = 2000, py::arg("k") = 100, py::arg("seed") = 0,
      py::arg("positive_level") = 2.0, py::arg("negative_level") = -1.0,
      py::arg("jitter_std") = 0.05,
      py::arg("positive_starts") = std::array<std::size_t, 2>{100, 500},
      py::arg("negative_starts") = std::array<std::size_t, 2>{1000, 1500},
      py::arg("raw") = false);

  m.def(
      "measure",
      [](const DoubleArray& a, const DoubleArray& x, double sigma, std::uint64_t seed) {
        return signs_to_array(measure(to_matrix(a), to_vector(x), NoiseSpec{sigma}, RngSeed{seed}));
      },
      py::arg("A"), py::arg("x"), py::arg("sigma") = 0.0, py::arg("seed") = 0);

  m.def(
      "sign_vector", [](const DoubleArray& v) { return signs_to_array(sign_vector(to_vector(v))); },
      py::arg("v"));

  m.def(
      "objective_value",
      [](const std::string& kind, const DoubleArray& a, const SignArray& y, const DoubleArray& x) {
        return objective_value(objective_from_string(kind), to_matrix(a), to_signs(y),
                               to_vector(x));
      },
      py::arg("kind"), py::arg("A"), py::arg("y"), py::arg("x"));

  m.def(
      "subgradient",
      [](const std::string& kind, const DoubleArray& a, const SignArray& y, const DoubleArray& x) {
        return to_array(
            subgradient(objective_from_string(kind), to_matrix(a), to_signs(y), to_vector(x)));
      },
      py::arg("kind"), py::arg("A"), py::arg("y"), py::arg("x"));

  m.def(
      "consistency_hamming",
      [](const SignArray& y, const DoubleArray& a, const DoubleArray& x) {
        return consistency_hamming(to_signs(y), to_matrix(a), to_vector(x));
      },
      py::arg("y"), py::arg("A"), py::arg("x"));

  m.def("tv", [](const DoubleArray& v) { return tv(to_vector(v)); }, py::arg("v"));
  m.def(
      "hard_threshold",
      [](const DoubleArray& v, std::size_t k) { return to_array(hard_threshold(to_vector(v), k)); },
      py::arg("v"), py::arg("k"));
  m.def(
      "tv_prox",
      [](const DoubleArray& v, double lambda) { return to_array(tv_prox(to_vector(v), lambda)); },
      py::arg("v"), py::arg("lam"));
  m.def(
      "project_tv_ball",
      [](const DoubleArray& v, double eps) { return to_array(project_tv_ball(to_vector(v), eps)); },
      py::arg("v"), py::arg("eps"));
  m.def(
      "project_nonneg", [](const DoubleArray& v) { return to_array(project_nonneg(to_vector(v))); },
      py::arg("v"));
  m.def(
      "normalize", [](const DoubleArray& v) { return to_array(normalize(to_vector(v))); },
      py::arg("v"));

  m.def(
      "recover",
      [](const DoubleArray& a, const SignArray& y, const std::string& algorithm,
         const std::string& objective, double tau, std::size_t k, std::optional<double> epsilon,
         bool nonneg, std::size_t max_iter, double tol, std::optional<DoubleArray> x0) {
        const SensingMatrix am = to_matrix(a);
        const SignObservations ys = to_signs(y);
        const SolverConfig c =
            make_config(algorithm, objective, tau, k, epsilon, nonneg, max_iter, tol, x0);
        SolverResult r;
        {
          py::gil_scoped_release release;
          r = recover(am, ys, c);
        }
        return result_to_dict(r);
      },
      py::arg("A"), py::arg("y"), py::arg("algorithm") = "BIHT", py::arg("objective") = "l1",
      py::arg("tau") = 1.0, py::arg("k") = 1, py::arg("epsilon") = py::none(),
      py::arg("nonneg") = false, py::arg("max_iter") = 300, py::arg("tol") = 1e-3,
      py::arg("x0") = py::none());

  m.def(
      "backprojection_start",
      [](const DoubleArray& a, const SignArray& y) {
        return to_array(backprojection_start(to_matrix(a), to_signs(y)));
      },
      py::arg("A"), py::arg("y"));

  m.def("mae", [](const DoubleArray& x, const DoubleArray& e) { return mae(to_vector(x), to_vector(e)); });
  m.def("mse", [](const DoubleArray& x, const DoubleArray& e) { return mse(to_vector(x), to_vector(e)); });
  m.def("snr_db", [](const DoubleArray& x, const DoubleArray& e) { return snr_db(to_vector(x), to_vector(e)); });
  m.def("per", [](const DoubleArray& x, const DoubleArray& e) { return per(to_vector(x), to_vector(e)); });
  m.def("age", [](const DoubleArray& x, const DoubleArray& e) { return age(to_vector(x), to_vector(e)); });
  m.def(
      "evaluate_metrics",
      [](const DoubleArray& x, const DoubleArray& e) {
        return metrics_to_dict(evaluate_metrics(to_vector(x), to_vector(e)));
      },
      py::arg("x"), py::arg("e"));

  m.def(
      "grid_search_bfcs",
      [](const DoubleArray& a, const SignArray& y, const DoubleArray& x_true,
         const std::vector<double>& taus, const std::vector<double>& eps_list, std::size_t k,
         const std::string& objective, bool nonneg, std::size_t max_iter, double tol,
         std::optional<DoubleArray> x0) {
        const SensingMatrix am = to_matrix(a);
        const SignObservations ys = to_signs(y);
        const Vector xt = to_vector(x_true);
        SolverConfig base =
            make_config("BFCS", objective, 1.0, k, 0.0, nonneg, max_iter, tol, x0);
        GridSearchResult g;
        {
          py::gil_scoped_release release;
          g = grid_search_bfcs(am, ys, xt, taus, eps_list, base);
        }
        py::dict d;
        d["tau"] = g.tau;
        d["epsilon"] = g.epsilon;
        d["snr_db"] = g.snr_db;
        d["result"] = result_to_dict(g.result);
        return d;
      },
      py::arg("A"), py::arg("y"), py::arg("x_true"), py::arg("taus"), py::arg("eps_list"),
      py::arg("k"), py::arg("objective") = "l1", py::arg("nonneg") = false,
      py::arg("max_iter") = 300, py::arg("tol") = 1e-3, py::arg("x0") = py::none());

  // Config and report travel as JSON text; the Python wrapper converts.
  m.def(
      "_run_experiment_json",
      [](const std::string& config_json, std::size_t jobs) {
        const ExperimentConfig config = io::experiment_config_from_json(io::Json::parse(config_json));
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(config, RunOptions{jobs, {}, 0});
        }
        io::Json rows = io::Json::array();
        for (const ExperimentRow& r : report.rows) {
          auto clean = [](double v) -> io::Json {
            if (std::isfinite(v)) return v;
            return nullptr;
          };
          rows.push_back({{"algorithm", r.algorithm},
                          {"K", r.k},
                          {"sigma", r.sigma},
                          {"trial", r.trial},
                          {"seed", r.seed},
                          {"status", r.status},
                          {"message", r.message},
                          {"mae", clean(r.metrics.mae)},
                          {"mse", clean(r.metrics.mse)},
                          {"snr_db", clean(r.metrics.snr_db)},
                          {"per", clean(r.metrics.per)},
                          {"age", clean(r.metrics.age)},
                          {"iterations", r.iterations},
                          {"converged", r.converged},
                          {"tau", r.tau},
                          {"epsilon", clean(r.epsilon)},
                          {"wall_time", r.wall_time}});
        }
        io::Json out = io::aggregates_to_json(report);
        out["rows"] = rows;
        return out.dump();
      },
      py::arg("config_json"), py::arg("jobs") = 1);
}
