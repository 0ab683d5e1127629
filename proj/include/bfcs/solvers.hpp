#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "bfcs/objectives.hpp"
#include "bfcs/sensing.hpp"

namespace bfcs {

enum class Algorithm {
  kBiht,  ///< x <- H_K(x - tau * g)
  kBfcs,  ///< x <- H_K(P_TV(x - tau * g))
};

std::string_view to_string(Algorithm algorithm);
/// Accepts "BIHT" and "BFCS" (case-insensitive).
Algorithm algorithm_from_string(std::string_view name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::kBiht;
  ObjectiveKind objective = ObjectiveKind::kOneSidedL1;
  double tau = 1.0;
  std::size_t k = 1;
  /// TV budget; required for BFCS, must be absent for BIHT.
  std::optional<double> epsilon;
  /// Clamp negatives to zero after the sparsity projection in every iteration.
  bool nonneg = false;
  std::size_t max_iter = 300;
  /// Stop when ||x_{k+1} - x_k|| / ||x_{k+1}|| <= tol.
  double tol = 1e-3;
  /// Starting point; zero vector when absent.
  std::optional<Vector> x0;

  /// Throws std::invalid_argument on tau <= 0, tol <= 0, k == 0, a negative
  /// epsilon, or epsilon present/absent for the wrong algorithm.
  void validate() const;
};

struct IterationRecord {
  /// Objective at the post-projection iterate x_{k+1}.
  double objective = 0.0;
  std::size_t hamming = 0;
  /// ||x_{k+1} - x_k|| / ||x_{k+1}||; +inf when x_{k+1} == 0.
  double rel_change = 0.0;
  /// TV of x_{k+1}.
  double tv = 0.0;
  /// TV of the vector handed to the sparsity projection: v_{k+1} for BIHT,
  /// P_TV(v_{k+1}) for BFCS.
  double tv_before_sparsity = 0.0;
  std::size_t nonzeros = 0;
};

struct SolverResult {
  Vector x_hat;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> trace;
};

/// A^T y / ||A^T y||. The one-sided l2 subgradient vanishes at x = 0, so l2
/// runs need a nonzero start; this is the usual one.
Vector backprojection_start(const SensingMatrix& a, const SignObservations& y);

/// Runs BIHT or BFCS on y = sign(A x + w) and returns the unit-norm estimate.
///
/// Each iteration takes a subgradient step, applies the projection chain
/// (TV ball, then K-sparse, then optionally nonnegative) and records the
/// objective, sign inconsistency and relative change. Throws DimensionError on
/// shape mismatch and DegenerateResult if the final iterate is zero or an
/// iterate overflows.
SolverResult recover(const SensingMatrix& a, const SignObservations& y,
                     const SolverConfig& config);

}  // namespace bfcs
