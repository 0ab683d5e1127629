#include "bfcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bfcs/errors.hpp"

namespace bfcs {

namespace {

void check_lengths(std::span<const double> x, std::span<const double> e) {
  if (x.size() != e.size()) {
    throw DimensionError("metric inputs differ in length: " + std::to_string(x.size()) + " vs " +
                         std::to_string(e.size()));
  }
  if (x.empty()) throw std::invalid_argument("metric inputs are empty");
}

double squared_distance(std::span<const double> x, std::span<const double> e) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - e[i]) * (x[i] - e[i]);
  return acc;
}

}  // namespace

double mae(std::span<const double> x, std::span<const double> e) {
  check_lengths(x, e);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - e[i]);
  return acc / static_cast<double>(x.size());
}

double mse(std::span<const double> x, std::span<const double> e) {
  check_lengths(x, e);
  return squared_distance(x, e) / static_cast<double>(x.size());
}

double snr_db(std::span<const double> x, std::span<const double> e) {
  check_lengths(x, e);
  const double d2 = squared_distance(x, e);
  if (d2 == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(d2);
}

double per(std::span<const double> x, std::span<const double> e) {
  check_lengths(x, e);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mismatches += (x[i] != 0.0) != (e[i] != 0.0);
  return static_cast<double>(mismatches) / static_cast<double>(x.size());
}

double age(std::span<const double> x, std::span<const double> e) {
  check_lengths(x, e);
  double xx = 0.0, ee = 0.0, xe = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x[i] * x[i];
    ee += e[i] * e[i];
    xe += x[i] * e[i];
  }
  if (std::abs(std::sqrt(xx) - 1.0) > 1e-9 || std::abs(std::sqrt(ee) - 1.0) > 1e-9) {
    throw std::invalid_argument("angle error requires unit-norm inputs");
  }
  return std::acos(std::clamp(xe, -1.0, 1.0)) / std::numbers::pi;
}

MetricReport evaluate_metrics(std::span<const double> x, std::span<const double> e) {
  return {mae(x, e), mse(x, e), snr_db(x, e), per(x, e), age(x, e)};
}

}  // namespace bfcs
