#include "bfcs/objectives.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "bfcs/errors.hpp"

namespace bfcs {

namespace {

void check_rows(const SignObservations& y, std::size_t rows) {
  if (y.size() != rows) {
    throw DimensionError("observations have " + std::to_string(y.size()) +
                         " signs but the matrix has " + std::to_string(rows) + " rows");
  }
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::kOneSidedL1 ? "ONE_SIDED_L1" : "ONE_SIDED_L2";
}

ObjectiveKind objective_from_string(std::string_view name) {
  if (name == "l1" || name == "L1" || name == "ONE_SIDED_L1") return ObjectiveKind::kOneSidedL1;
  if (name == "l2" || name == "L2" || name == "ONE_SIDED_L2") return ObjectiveKind::kOneSidedL2;
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

Vector negative_part(std::span<const double> z) {
  Vector out(z.size());
  std::transform(z.begin(), z.end(), out.begin(), [](double v) { return std::min(v, 0.0); });
  return out;
}

double objective_value_from_product(ObjectiveKind kind, const SignObservations& y,
                                    std::span<const double> ax) {
  check_rows(y, ax.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double zi = std::min(y[i] * ax[i], 0.0);
    acc += kind == ObjectiveKind::kOneSidedL1 ? -zi : zi * zi;
  }
  return kind == ObjectiveKind::kOneSidedL1 ? 2.0 * acc : 0.5 * acc;
}

Vector subgradient_from_product(ObjectiveKind kind, const SensingMatrix& a,
                                const SignObservations& y, std::span<const double> ax) {
  check_rows(y, a.rows());
  if (ax.size() != a.rows()) throw DimensionError("product length does not match matrix rows");
  Vector r(ax.size());
  for (std::size_t i = 0; i < ax.size(); ++i) {
    if (kind == ObjectiveKind::kOneSidedL1) {
      r[i] = static_cast<double>(sign_of(ax[i]) - y[i]);
    } else {
      // Row i of (YA)^T (YAx)_- contributes y_i * min(y_i (Ax)_i, 0) * a_i.
      r[i] = y[i] * std::min(y[i] * ax[i], 0.0);
    }
  }
  return a.multiply_transposed(r);
}

std::size_t consistency_hamming_from_product(const SignObservations& y,
                                             std::span<const double> ax) {
  check_rows(y, ax.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < ax.size(); ++i) count += sign_of(ax[i]) != y[i];
  return count;
}

double objective_value(ObjectiveKind kind, const SensingMatrix& a, const SignObservations& y,
                       std::span<const double> x) {
  check_rows(y, a.rows());
  return objective_value_from_product(kind, y, a.multiply(x));
}

Vector subgradient(ObjectiveKind kind, const SensingMatrix& a, const SignObservations& y,
                   std::span<const double> x) {
  check_rows(y, a.rows());
  return subgradient_from_product(kind, a, y, a.multiply(x));
}

std::size_t consistency_hamming(const SignObservations& y, const SensingMatrix& a,
                                std::span<const double> x) {
  check_rows(y, a.rows());
  return consistency_hamming_from_product(y, a.multiply(x));
}

ObjectiveEval evaluate(ObjectiveKind kind, const SensingMatrix& a, const SignObservations& y,
                       std::span<const double> x) {
  check_rows(y, a.rows());
  const Vector ax = a.multiply(x);
  return {objective_value_from_product(kind, y, ax), subgradient_from_product(kind, a, y, ax)};
}

}  // namespace bfcs
