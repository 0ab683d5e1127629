#pragma once

#include <cstddef>
#include <span>

#include "bfcs/sensing.hpp"

namespace bfcs {

/// Absolute tolerance on TV(output) - eps accepted from project_tv_ball.
inline constexpr double kTvTolerance = 1e-9;

/// sum_i |v_{i+1} - v_i|. Throws std::invalid_argument on an empty vector.
double tv(std::span<const double> v);

/// Best K-term approximation: keeps the K entries of largest magnitude.
/// Among equal magnitudes the lower index wins. Throws std::invalid_argument
/// if k > v.size().
Vector hard_threshold(std::span<const double> v, std::size_t k);

/// argmin_u 1/2 ||u - v||^2 + lambda TV(u), computed exactly with Condat's
/// direct 1D algorithm. Throws std::invalid_argument if lambda < 0.
Vector tv_prox(std::span<const double> v, double lambda);

/// Smallest lambda for which tv_prox(v, lambda) is the constant mean vector:
/// max_k |sum_{i<=k} (v_i - mean(v))|.
double tv_prox_lambda_max(std::span<const double> v);

/// Euclidean projection onto {u : TV(u) <= eps}.
///
/// Searches lambda in [0, lambda_max] for TV(tv_prox(v, lambda)) = eps, which
/// is continuous, piecewise linear and nonincreasing in lambda. The bracket
/// shrinks by safeguarded Newton steps until |TV - eps| <= kTvTolerance or it is narrower
/// than 1e-12 relative, in which case the feasible end is returned.
/// Returns v itself when TV(v) <= eps and the mean vector when eps == 0.
Vector project_tv_ball(std::span<const double> v, double eps);

/// Elementwise max(v, 0).
Vector project_nonneg(std::span<const double> v);

/// v / ||v||_2. Throws DegenerateResult for the zero vector.
Vector normalize(std::span<const double> v);

double norm2(std::span<const double> v);

}  // namespace bfcs
