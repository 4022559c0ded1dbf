#ifndef QUAKESIM_RANDOM_HPP
#define QUAKESIM_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace quakesim {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of replica `index` under master seed `seed`:
///   splitmix64(splitmix64(seed) ^ splitmix64(index + 1)).
/// Part of the external interface; other implementations reproduce runs by
/// seeding std::mt19937_64 with this value.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 1));
}

/// mt19937_64 with portable variate generation (the std distributions are
/// implementation-defined, so they are avoided).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(stream_seed(seed, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1): 53 random bits, offset by half a ulp.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exp(1) by inversion.
  double exponential() { return -std::log(uniform_open()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace quakesim

#endif  // QUAKESIM_RANDOM_HPP
