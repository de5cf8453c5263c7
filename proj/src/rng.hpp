#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace voltcast {

// Deterministic PRNG with toolchain-independent distributions. All sampling
// in the project goes through this type so that a (seed, call sequence) pair
// pins every generated value.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed == 0 ? 0x9e3779b97f4a7c15ULL : seed) {
    // splitmix64 warm-up decorrelates small consecutive seeds
    for (int i = 0; i < 4; ++i) next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  bool coin(double p = 0.5) { return u01() < p; }

  // Marsaglia polar method; consumes a variable number of draws but is
  // deterministic for a fixed call sequence.
  double normal() {
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

  template <typename T>
  const T& pick(const std::vector<T>& options) {
    return options[static_cast<std::size_t>(below(options.size()))];
  }

 private:
  std::uint64_t state_;
};

}  // namespace voltcast
