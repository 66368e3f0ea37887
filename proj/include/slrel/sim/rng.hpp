#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace slrel {

/// Stateless counter-based generator: every draw is a pure function of the
/// seed and a key tuple, so streams split per object without coordination.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::initializer_list<std::uint64_t> key) const {
    std::uint64_t h = mix(seed_);
    for (std::uint64_t k : key) {
      h = mix(h ^ mix(k));
    }
    return h;
  }

  /// Uniform on the open interval (0, 1).
  double uniform(std::initializer_list<std::uint64_t> key) const {
    return to_unit(bits(key));
  }

  double uniform(double lo, double hi, std::initializer_list<std::uint64_t> key) const {
    return lo + (hi - lo) * uniform(key);
  }

  /// Standard normal via Box-Muller on two derived words.
  double normal(std::initializer_list<std::uint64_t> key) const {
    const std::uint64_t h = bits(key);
    const double u1 = to_unit(mix(h ^ 0x1ULL));
    const double u2 = to_unit(mix(h ^ 0x2ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static double to_unit(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed_;
};

}  // namespace slrel
