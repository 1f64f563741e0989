#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace comick {

// Seeded generator with distribution helpers written out by hand, so that the
// same seed produces the same stream regardless of the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Uniform in [0, n); n > 0.
  std::uint64_t index(std::uint64_t n);

  // Independent stream derived from this seed and a label.
  static Rng derive(std::uint64_t seed, std::string_view label);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a(std::string_view text);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace comick
