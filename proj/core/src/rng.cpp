#include "ifd/rng.hpp"

#include <cmath>
#include <numbers>

namespace ifd {

std::uint64_t splitmix64_mix(std::uint64_t value) {
  value ^= value >> 30;
  value *= 0xbf58476d1ce4e5b9ULL;
  value ^= value >> 27;
  value *= 0x94d049bb133111ebULL;
  value ^= value >> 31;
  return value;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64_mix(splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL) ^
                          splitmix64_mix(stream + 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::next_u64() {
  counter_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64_mix(key_ + counter_);
}

double CounterRng::next_unit() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace ifd
