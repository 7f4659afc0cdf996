#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace qst {

/// SplitMix64, used as a counter-based generator: the state advances by a
/// fixed odd increment and every output is a bijective mix of the state.
/// Independent streams are obtained by deriving distinct seeds (see
/// derive_seed below), which keeps sampling schedule-independent when work
/// is distributed over settings or repetitions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a logarithm argument.
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal pair via Box-Muller.
  void next_gaussian_pair(double& g0, double& g1) {
    const double u = next_double_open();
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    constexpr double two_pi = 6.283185307179586476925286766559;
    g0 = r * std::cos(two_pi * v);
    g1 = r * std::sin(two_pi * v);
  }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<std::uint64_t>::max();
  }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t state_;
};

/// One avalanche round; combines a running seed with one more component.
inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t value) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (value + 0x632BE59BD9B4E019ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a stream seed from a master seed and a tag sequence
/// (site indices, operator labels, repetition counters, ...).
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = hash_mix(0x7F4A7C15ULL, master);
  for (std::uint64_t t : tags) h = hash_mix(h, t);
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = hash_mix(0x7F4A7C15ULL, master);
  for (char c : tag) h = hash_mix(h, static_cast<unsigned char>(c));
  return h;
}

}  // namespace qst
