#include "bfcs/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bfcs/errors.hpp"
#include "bfcs/projections.hpp"

namespace bfcs {

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kBiht ? "BIHT" : "BFCS";
}

Algorithm algorithm_from_string(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "BIHT") return Algorithm::kBiht;
  if (upper == "BFCS") return Algorithm::kBfcs;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (k == 0) throw std::invalid_argument("sparsity K must be >= 1");
  if (algorithm == Algorithm::kBfcs) {
    if (!epsilon) throw std::invalid_argument("BFCS requires epsilon");
    if (!(*epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  } else if (epsilon) {
    throw std::invalid_argument("epsilon is only meaningful for BFCS");
  }
}

Vector backprojection_start(const SensingMatrix& a, const SignObservations& y) {
  if (y.size() != a.rows()) throw DimensionError("observations do not match matrix rows");
  Vector r(y.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i];
  return normalize(a.multiply_transposed(r));
}

SolverResult recover(const SensingMatrix& a, const SignObservations& y,
                     const SolverConfig& config) {
  config.validate();
  const std::size_t n = a.cols();
  if (y.size() != a.rows()) {
    throw DimensionError("matrix is " + std::to_string(a.rows()) + "x" + std::to_string(n) +
                         " but observations have " + std::to_string(y.size()) + " signs");
  }
  if (config.k > n) {
    throw std::invalid_argument("sparsity K = " + std::to_string(config.k) + " exceeds n = " +
                                std::to_string(n));
  }
  Vector x = config.x0.value_or(Vector(n, 0.0));
  if (x.size() != n) {
    throw DimensionError("x0 has " + std::to_string(x.size()) + " entries, expected " +
                         std::to_string(n));
  }

  SolverResult result;
  result.trace.reserve(std::min<std::size_t>(config.max_iter, 4096));
  Vector ax = a.multiply(x);

  for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
    const Vector g = subgradient_from_product(config.objective, a, y, ax);
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = x[j] - config.tau * g[j];

    IterationRecord rec;
    if (config.algorithm == Algorithm::kBfcs) {
      v = project_tv_ball(v, *config.epsilon);
    }
    rec.tv_before_sparsity = tv(v);
    Vector next = hard_threshold(v, config.k);
    if (config.nonneg) next = project_nonneg(next);

    double diff2 = 0.0;
    double next2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = next[j] - x[j];
      diff2 += d * d;
      next2 += next[j] * next[j];
    }
    if (!std::isfinite(next2)) {
      throw DegenerateResult("solver diverged to a non-finite iterate at iteration " +
                             std::to_string(iter + 1) + "; reduce tau");
    }
    rec.rel_change = next2 > 0.0 ? std::sqrt(diff2 / next2)
                                 : std::numeric_limits<double>::infinity();

    x = std::move(next);
    ax = a.multiply(x);
    rec.objective = objective_value_from_product(config.objective, y, ax);
    rec.hamming = consistency_hamming_from_product(y, ax);
    rec.tv = tv(x);
    rec.nonzeros = static_cast<std::size_t>(
        std::count_if(x.begin(), x.end(), [](double t) { return t != 0.0; }));
    result.trace.push_back(rec);
    result.iterations = iter + 1;

    if (rec.rel_change <= config.tol) {
      result.converged = true;
      break;
    }
  }

  if (norm2(x) == 0.0) {
    throw DegenerateResult("solver iterate collapsed to the zero vector after " +
                           std::to_string(result.iterations) + " iterations");
  }
  result.x_hat = normalize(x);
  return result;
}

}  // namespace bfcs
