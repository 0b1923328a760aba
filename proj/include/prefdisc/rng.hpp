#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace prefdisc {

// Deterministic random stream. mt19937_64 is bit-exact across platforms by
// standard; uniforms and normals are derived from its raw output with explicit
// arithmetic (no std::*_distribution, whose algorithms are implementation
// defined), so a seed pins the whole stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

  // Independent stream for one replication of a batch job.
  static Rng for_replication(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(mix(master_seed) ^ mix(index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method (one spare cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Index draw from a probability vector, by inverse CDF in index order.
  std::size_t categorical(std::span<const double> probs) {
    const double x = uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (x < acc) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  // splitmix64 finalizer; decorrelates sequential seeds before they reach the engine.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace prefdisc
