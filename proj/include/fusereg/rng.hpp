#ifndef FUSEREG_RNG_HPP
#define FUSEREG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace fusereg {

// splitmix64 finalizer; used to turn (seed, index) pairs into well-spread
// engine seeds so every replicate owns an independent substream.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b) ^ mix64(c));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return mix64(mix64(a, b), mix64(c, d));
}

// Deterministic random stream. All transforms are explicit inverse-CDF /
// Box-Muller forms on top of mt19937_64 so a (seed, index) pair fixes the
// draw sequence exactly, independent of standard-library distribution
// internals and of how many worker threads consume sibling streams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(mix64(seed)) {}

  static RngStream substream(std::uint64_t seed, std::uint64_t index) {
    return RngStream(mix64(seed, index));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Strictly inside (0,1): keeps log() calls finite.
  double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential() { return -std::log(uniform()); }

  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  int bernoulli(double p) { return uniform() < p ? 1 : 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fusereg

#endif  // FUSEREG_RNG_HPP
