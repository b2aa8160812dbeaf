#include "osgood/rng.hpp"

#include <cmath>
#include <numbers>

namespace osgood {
namespace {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::at(std::uint64_t counter) const {
  // Two rounds of the SplitMix64 finalizer over (seed, stream, counter).
  const std::uint64_t key = mix64(seed_ + 0x9e3779b97f4a7c15ULL * (stream_ + 1));
  return mix64(key ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CounterRng CounterRng::split(std::uint64_t child) const {
  return CounterRng(mix64(seed_ ^ mix64(stream_ + 0x1234567ULL)), child);
}

}  // namespace osgood
