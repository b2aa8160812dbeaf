#pragma once

#include <cstdint>

namespace osgood {

/// Counter-based generator: draw k of stream s is a pure function of
/// (seed, s, k), so results do not depend on evaluation order or platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  /// Raw 64-bit draw at an explicit counter value.
  [[nodiscard]] std::uint64_t at(std::uint64_t counter) const;

  std::uint64_t next_u64() { return at(counter_++); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (no cached spare, keeps the counter simple).
  double normal();

  /// Independent child stream; children of the same parent never overlap.
  [[nodiscard]] CounterRng split(std::uint64_t child) const;

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace osgood
