#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bfcs {

/// Seed for every random draw in the library. Identical seeds and arguments
/// give bit-identical outputs.
struct RngSeed {
  std::uint64_t value = 0;
};

/// Purpose tags for independent substreams derived from one base seed.
enum class Stream : std::uint64_t {
  kMatrix = 1,
  kSignal = 2,
  kNoise = 3,
};

/// SplitMix64 finalizer. Used only to derive seeds, never as a sample source.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a child seed from `base` by hashing each path element in order.
/// Different paths give statistically independent substreams.
RngSeed derive_seed(RngSeed base, std::initializer_list<std::uint64_t> path);

/// Portable Gaussian source.
///
/// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Normal deviates use the Box-Muller transform on two uniforms
/// in (0, 1] built from the top 53 bits, consuming both outputs of each pair
/// (cosine branch first). std::normal_distribution is avoided because its
/// algorithm is implementation-defined.
class GaussianRng {
 public:
  explicit GaussianRng(RngSeed seed) : engine_(seed.value) {}

  /// Uniform in (0, 1].
  double uniform();
  /// Standard normal deviate.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace bfcs
