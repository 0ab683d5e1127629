#include "bfcs/rng.hpp"

#include <cmath>
#include <numbers>

namespace bfcs {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngSeed derive_seed(RngSeed base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base.value);
  for (std::uint64_t p : path) {
    h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  }
  return RngSeed{h};
}

double GaussianRng::uniform() {
  // (bits + 1) * 2^-53 lies in (0, 1].
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double GaussianRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace bfcs
