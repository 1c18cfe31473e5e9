#pragma once

#include <cstdint>

namespace ifd {

// Counter-based pseudorandom stream: every output is a pure function of
// (seed, stream, counter), so trials can be scheduled on any thread without
// changing the sample set. The mixer is the SplitMix64 finalizer.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on (0, 1].
  double next_unit();
  // Standard normal via Box-Muller; pairs are cached.
  double next_normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

std::uint64_t splitmix64_mix(std::uint64_t value);

}  // namespace ifd
