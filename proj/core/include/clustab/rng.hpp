#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace clustab {

/// Pinned generator family tag. Configs carry this tag so a run can refuse to
/// proceed when the requested stream family does not match the build.
inline constexpr std::string_view kRngFamily = "splitmix64/mt19937_64-v1";

/// splitmix64 finalizer; used only for seed derivation, never for sampling.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic sub-stream derivation: fold tokens into the seed one at a
/// time with splitmix64. derive_seed(base, rep, fold, k) is the rule every
/// cross-validation cell uses, so results are independent of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base) { return base; }

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t token,
                                    Rest... rest) {
  return derive_seed(splitmix64(base ^ (token * 0x9e3779b97f4a7c15ULL + 1)),
                     rest...);
}

/// Seedable wrapper around std::mt19937_64. Integer draws use only integer
/// arithmetic (rejection sampling), so shuffle and fold structure reproduce
/// across platforms. Floating-point draws are deterministic per build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t q = std::numeric_limits<std::uint64_t>::max() / n;
    const std::uint64_t limit = q * n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  /// Uniform in [0, 1) with 53 mantissa bits.
  double real01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; one variate per pair of uniforms.
  double normal() {
    double u1 = real01();
    while (u1 <= 0.0) u1 = real01();
    const double u2 = real01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Fisher-Yates shuffle driven by below(), hence portable.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace clustab
