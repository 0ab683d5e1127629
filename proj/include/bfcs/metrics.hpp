#pragma once

#include <span>

namespace bfcs {

struct MetricReport {
  double mae = 0.0;
  double mse = 0.0;
  double snr_db = 0.0;
  double per = 0.0;
  double age = 0.0;
};

/// ||x - e||_1 / n.
double mae(std::span<const double> x, std::span<const double> e);
/// ||x - e||_2^2 / n.
double mse(std::span<const double> x, std::span<const double> e);
/// -10 log10 ||x - e||_2^2 for unit-norm x; +infinity when e == x.
double snr_db(std::span<const double> x, std::span<const double> e);
/// Fraction of positions where exactly one of x_i, e_i is nonzero.
double per(std::span<const double> x, std::span<const double> e);
/// arccos<x, e> / pi for unit vectors, with the inner product clamped to [-1, 1].
/// Throws std::invalid_argument if either norm is off 1 by more than 1e-9.
double age(std::span<const double> x, std::span<const double> e);

MetricReport evaluate_metrics(std::span<const double> x, std::span<const double> e);

}  // namespace bfcs
