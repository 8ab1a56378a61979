#pragma once

#include <cmath>
#include <cstdint>

namespace linforget {

/// Splittable counter-style PRNG.
///
/// The core is SplitMix64: the state advances by a fixed odd increment and
/// each output is an avalanche mix of the state, so a stream is a pure
/// function of (seed, stream). Identical (seed, stream) pairs reproduce
/// identical sequences run to run, and substreams derived with substream()
/// depend only on the parent's identity, never on how far the parent has
/// been consumed. That makes per-cell / per-trial streams order-independent
/// under any parallel schedule.
///
/// Gaussians come from the Box-Muller transform (pair-cached), so the
/// normal deviate sequence is fixed by the uniform stream alone.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), state_(mix(seed, stream)) {}

  /// Avalanche-mixes (seed, stream) into a single 64-bit value. This is the
  /// documented derivation used for per-cell seeds in sweeps.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return finalize(finalize(seed + kGolden) ^ finalize(stream + kStreamSalt));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Child stream addressed by `id`; independent of the parent's position.
  SeededRng substream(std::uint64_t id) const {
    return SeededRng(seed_, finalize(stream_ + kStreamSalt) + id);
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return finalize(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate via Box-Muller; one transform yields two
  /// deviates, the second is cached.
  double next_gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer on [0, bound); unbiased by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStreamSalt = 0xda3e39cb94b95bdbULL;

  // SplitMix64 output function (Stafford variant 13).
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace linforget
