#pragma once

// Random source "obm-rng/1":
//   * seeds are split with the SplitMix64 finalizer,
//   * each stream is xoshiro256++ whose state is filled by SplitMix64,
//   * uniforms use the top 53 bits, normals use the two-output Box–Muller
//     transform (cos branch first).
// Any change to this recipe must bump kRngVersion; acceptance thresholds
// were pinned against version 1.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace obm::rng {

inline constexpr int kRngVersion = 1;

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the i-th child stream of `seed`.
constexpr std::uint64_t split(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

/// Uniform on (0, 1]; never returns 0 so log() is always finite.
inline double uniform_open0(Xoshiro256pp& g) noexcept {
  return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform on [0, 1).
inline double uniform(Xoshiro256pp& g) noexcept {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Standard normal variates by Box–Muller, buffering the sine output.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) noexcept : gen_(seed) {}

  double operator()() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open0(gen_);
    const double u2 = rng::uniform(gen_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double uniform() noexcept { return rng::uniform_open0(gen_); }

 private:
  Xoshiro256pp gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace obm::rng
