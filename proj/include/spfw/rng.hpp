#ifndef SPFW_RNG_HPP
#define SPFW_RNG_HPP

#include <cmath>
#include <cstdint>

namespace spfw {

// SplitMix64 (Vigna 2015; the mixer behind Java's SplittableRandom).
// Counter-based: output i equals mix(seed + (i+1) * 0x9E3779B97F4A7C15), so
// any implementation, in any language, reproduces the stream from the seed
// alone. Reference outputs for seed 0:
//   0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal (Box-Muller, cosine branch only).
  double next_gaussian() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace spfw

#endif  // SPFW_RNG_HPP
