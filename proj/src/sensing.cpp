#include "bfcs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bfcs/errors.hpp"

namespace bfcs {

SensingMatrix::SensingMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("sensing matrix dimensions must be positive");
  }
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("sensing matrix expects " + std::to_string(rows_ * cols_) +
                                " entries, got " + std::to_string(entries_.size()));
  }
  if (!std::all_of(entries_.begin(), entries_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("sensing matrix has non-finite entries");
  }
}

Vector SensingMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) {
    throw DimensionError("matrix has " + std::to_string(cols_) + " columns but vector has " +
                         std::to_string(x.size()) + " entries");
  }
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < cols_; ++j) {
    if (x[j] != 0.0) support.push_back(j);
  }
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = entries_.data() + i * cols_;
    double acc = 0.0;
    for (std::size_t j : support) acc += r[j] * x[j];
    out[i] = acc;
  }
  return out;
}

Vector SensingMatrix::multiply_transposed(std::span<const double> r) const {
  if (r.size() != rows_) {
    throw DimensionError("matrix has " + std::to_string(rows_) + " rows but vector has " +
                         std::to_string(r.size()) + " entries");
  }
  Vector out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double ri = r[i];
    if (ri == 0.0) continue;
    const double* row_ptr = entries_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) out[j] += row_ptr[j] * ri;
  }
  return out;
}

SignObservations::SignObservations(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
  for (std::int8_t s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("sign observations must be +1 or -1");
  }
}

void SignalSpec::validate() const {
  if (k == 0 || k % 4 != 0) {
    throw std::invalid_argument("sparsity K must be a positive multiple of 4, got " +
                                std::to_string(k));
  }
  const std::size_t len = k / 4;
  std::array<std::size_t, 4> starts{positive_starts[0], positive_starts[1], negative_starts[0],
                                    negative_starts[1]};
  for (std::size_t s : starts) {
    if (s + len > n) {
      throw std::invalid_argument("block starting at " + std::to_string(s) + " of length " +
                                  std::to_string(len) + " exceeds n = " + std::to_string(n));
    }
  }
  std::sort(starts.begin(), starts.end());
  for (std::size_t b = 1; b < starts.size(); ++b) {
    if (starts[b] < starts[b - 1] + len) {
      throw std::invalid_argument("signal blocks overlap");
    }
  }
  if (!(jitter_std >= 0.0)) throw std::invalid_argument("jitter_std must be >= 0");
}

SensingMatrix gaussian_matrix(std::size_t m, std::size_t n, RngSeed seed) {
  if (m == 0 || n == 0) {
    throw std::invalid_argument("gaussian_matrix requires positive dimensions");
  }
  GaussianRng rng(seed);
  std::vector<double> entries(m * n);
  for (double& e : entries) e = rng.normal();
  return SensingMatrix(m, n, std::move(entries));
}

Vector generate_raw_signal(const SignalSpec& spec, RngSeed seed) {
  spec.validate();
  GaussianRng rng(seed);
  const std::size_t len = spec.k / 4;
  Vector x(spec.n, 0.0);
  // Jitter is drawn block by block: positive blocks first, then negative.
  auto fill = [&](std::size_t start, double level) {
    for (std::size_t i = start; i < start + len; ++i) x[i] = level + spec.jitter_std * rng.normal();
  };
  fill(spec.positive_starts[0], spec.positive_level);
  fill(spec.positive_starts[1], spec.positive_level);
  fill(spec.negative_starts[0], spec.negative_level);
  fill(spec.negative_starts[1], spec.negative_level);
  return x;
}

Vector generate_signal(const SignalSpec& spec, RngSeed seed) {
  Vector x = generate_raw_signal(spec, seed);
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (norm2 == 0.0) throw DegenerateResult("generated signal is identically zero");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : x) v *= inv;
  return x;
}

SignObservations measure(const SensingMatrix& a, std::span<const double> x, NoiseSpec noise,
                         RngSeed seed) {
  if (!(noise.sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  Vector z = a.multiply(x);
  if (noise.sigma > 0.0) {
    GaussianRng rng(seed);
    for (double& v : z) v += noise.sigma * rng.normal();
  }
  return sign_vector(z);
}

SignObservations sign_vector(std::span<const double> v) {
  std::vector<std::int8_t> s(v.size());
  std::transform(v.begin(), v.end(), s.begin(), sign_of);
  return SignObservations(std::move(s));
}

}  // namespace bfcs
