#pragma once

// Counter-based deterministic random streams (splitmix64). Stream i of a
// given seed is independent of all other streams, so sample i can always be
// drawn from stream i no matter which worker runs it; results never depend
// on the thread count.

#include <cstdint>

namespace slicelab {

namespace detail {
inline std::uint64_t splitmix_step(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed;
    state_ = detail::splitmix_step(s) ^ (0xBF58476D1CE4E5B9ull * (stream + 1));
  }

  std::uint64_t next() { return detail::splitmix_step(state_); }

  // uniform in [0, bound), unbiased via rejection
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // uniform m-bit word, m <= 64
  std::uint64_t next_bits(int m) {
    const std::uint64_t r = next();
    return m >= 64 ? r : (r & ((std::uint64_t{1} << m) - 1));
  }

  // uniform double in [0, 1)
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace slicelab
