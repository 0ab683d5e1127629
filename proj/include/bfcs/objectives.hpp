#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "bfcs/sensing.hpp"

namespace bfcs {

/// Data-fidelity penalties on z = y (.) A x that only charge sign violations.
enum class ObjectiveKind {
  kOneSidedL1,  ///< f(z) = 2 ||min(z, 0)||_1
  kOneSidedL2,  ///< f(z) = 1/2 ||min(z, 0)||_2^2
};

std::string_view to_string(ObjectiveKind kind);
/// Accepts "l1"/"ONE_SIDED_L1" and "l2"/"ONE_SIDED_L2".
ObjectiveKind objective_from_string(std::string_view name);

struct ObjectiveEval {
  double value = 0.0;
  Vector subgradient;
};

/// Elementwise min(z, 0).
Vector negative_part(std::span<const double> z);

double objective_value(ObjectiveKind kind, const SensingMatrix& a, const SignObservations& y,
                       std::span<const double> x);

/// l1: A^T (sign(Ax) - y), with sign(0) = -1.
/// l2: (YA)^T (YAx)_-, with Y = diag(y).
Vector subgradient(ObjectiveKind kind, const SensingMatrix& a, const SignObservations& y,
                   std::span<const double> x);

/// Number of rows where sign((Ax)_i) != y_i.
std::size_t consistency_hamming(const SignObservations& y, const SensingMatrix& a,
                                std::span<const double> x);

// Variants taking a precomputed product ax = A x, so a solver iteration needs a
// single forward product.
double objective_value_from_product(ObjectiveKind kind, const SignObservations& y,
                                    std::span<const double> ax);
Vector subgradient_from_product(ObjectiveKind kind, const SensingMatrix& a,
                                const SignObservations& y, std::span<const double> ax);
std::size_t consistency_hamming_from_product(const SignObservations& y,
                                             std::span<const double> ax);

ObjectiveEval evaluate(ObjectiveKind kind, const SensingMatrix& a, const SignObservations& y,
                       std::span<const double> x);

}  // namespace bfcs
