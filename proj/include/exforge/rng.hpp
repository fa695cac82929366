#pragma once

#include <cstdint>
#include <random>

#include "exforge/bitstring.hpp"

namespace exforge {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Explicit randomness stream. mt19937_64's output sequence is fixed by the
// standard; the distributions below avoid the implementation-defined std ones
// so a seed reproduces the same bits on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  bool coin() { return eng_() >> 63; }

  // Uniform on [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t lim = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    for (;;) {
      std::uint64_t v = eng_();
      if (v < lim) return v % n;
    }
  }

  BitString bits(std::size_t len) {
    BitString b(len);
    for (std::size_t i = 0; i < len; i += 64) {
      std::size_t k = std::min<std::size_t>(64, len - i);
      std::uint64_t v = eng_();
      for (std::size_t j = 0; j < k; ++j) b.set(i + j, (v >> (63 - j)) & 1);
    }
    return b;
  }

  // Independent child stream, e.g. one per worker or per trial block.
  Rng fork(std::uint64_t stream) { return Rng(splitmix64(eng_() ^ splitmix64(stream))); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace exforge
