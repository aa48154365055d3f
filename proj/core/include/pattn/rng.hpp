#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace pattn {

/// Deterministic random source.  The engine (mt19937_64) has a bit-exact
/// specification in the standard; the distribution transforms below are
/// implemented by hand because the std::*_distribution adapters are
/// implementation-defined and would break byte-identical reproduction
/// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; generates pairs, caches the second value.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform index in [0, n).  n must be positive.
  std::size_t index(std::size_t n) {
    std::size_t k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// Independent child stream identified by a tag; same (seed, tag) pair
  /// always yields the same stream.
  Rng derive(std::string_view tag) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the tag bytes
    for (unsigned char c : tag) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return Rng(mix(seed_ ^ h));
  }

  Rng derive(std::string_view tag, std::uint64_t n) const {
    Rng r = derive(tag);
    return Rng(mix(r.seed_ + 0x9e3779b97f4a7c15ull * (n + 1)));
  }

 private:
  // splitmix64 finalizer; decorrelates related seeds.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pattn
