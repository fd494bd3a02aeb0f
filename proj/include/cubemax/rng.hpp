#ifndef CUBEMAX_RNG_HPP
#define CUBEMAX_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cubemax {

/// SplitMix64 step; derives independent per-repetition seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 1));
}

/// mt19937_64 with distribution code written out, so streams do not depend
/// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = std::uint64_t(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do r = eng_();
    while (r >= limit);
    return lo + int(r % span);
  }
  bool coin(double p = 0.5) { return uniform01() < p; }
  /// Standard normal via Box-Muller.
  double normal() {
    const double u = 1.0 - uniform01();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cubemax

#endif  // CUBEMAX_RNG_HPP
