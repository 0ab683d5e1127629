#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bfcs/rng.hpp"

namespace bfcs {

using Vector = std::vector<double>;

/// Dense row-major m x n matrix with deterministic matrix-vector products.
///
/// Both products accumulate in double, in ascending index order. Zero entries
/// of the right-hand side are skipped, which leaves the result unchanged and
/// makes products with sparse iterates cost O(m * nnz).
class SensingMatrix {
 public:
  SensingMatrix() = default;
  /// Throws std::invalid_argument on a zero dimension, a size mismatch or a
  /// non-finite entry.
  SensingMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> entries() const { return entries_; }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  /// A x. Throws DimensionError if x.size() != cols().
  Vector multiply(std::span<const double> x) const;
  /// A^T r. Throws DimensionError if r.size() != rows().
  Vector multiply_transposed(std::span<const double> r) const;

  bool operator==(const SensingMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// y in {+1, -1}^m.
class SignObservations {
 public:
  SignObservations() = default;
  /// Throws std::invalid_argument if any entry is not exactly +1 or -1.
  explicit SignObservations(std::vector<std::int8_t> signs);

  std::size_t size() const { return signs_.size(); }
  std::int8_t operator[](std::size_t i) const { return signs_[i]; }
  std::span<const std::int8_t> signs() const { return signs_; }

  bool operator==(const SignObservations&) const = default;

 private:
  std::vector<std::int8_t> signs_;
};

/// Sparse piecewise-smooth test signal: two blocks near `positive_level`
/// and two near `negative_level`, each K/4 long, zero elsewhere, then
/// normalized. Defaults reproduce the n = 2000 experiments.
struct SignalSpec {
  std::size_t n = 2000;
  std::size_t k = 100;
  double positive_level = 2.0;
  double negative_level = -1.0;
  double jitter_std = 0.05;
  std::array<std::size_t, 2> positive_starts{100, 500};
  std::array<std::size_t, 2> negative_starts{1000, 1500};

  /// Throws std::invalid_argument unless K % 4 == 0, K > 0 and the four
  /// blocks lie in [0, n) without overlapping.
  void validate() const;
};

struct NoiseSpec {
  /// Standard deviation of the additive Gaussian noise before quantization.
  double sigma = 0.0;
};

/// I.i.d. standard normal entries, drawn row-major from one GaussianRng.
SensingMatrix gaussian_matrix(std::size_t m, std::size_t n, RngSeed seed);

/// Block signal per SignalSpec before normalization (xbar).
Vector generate_raw_signal(const SignalSpec& spec, RngSeed seed);

/// generate_raw_signal scaled to unit Euclidean norm. Throws DegenerateResult
/// if every entry is zero.
Vector generate_signal(const SignalSpec& spec, RngSeed seed);

/// y = sign(A x + w) with w ~ N(0, sigma^2 I). No noise is drawn when sigma == 0.
SignObservations measure(const SensingMatrix& a, std::span<const double> x,
                         NoiseSpec noise, RngSeed seed);

/// +1 for strictly positive entries, -1 otherwise (zero maps to -1).
SignObservations sign_vector(std::span<const double> v);

inline std::int8_t sign_of(double t) { return t > 0.0 ? 1 : -1; }

}  // namespace bfcs
