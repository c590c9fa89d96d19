#pragma once

#include <cstdint>

namespace conformal {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic stream derived from (seed, index); sampling work split by
// index is schedule-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t index = 0) {
    state_ = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
    splitmix64(state_);
    splitmix64(state_);
  }
  std::uint64_t next_u64() { return splitmix64(state_); }
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // Uniform in {0, ..., n-1}; modulo bias is negligible for desk-scale n.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace conformal
