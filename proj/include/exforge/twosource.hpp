#pragma once

// Inner-product two-source extractor over GF(2^m) blocks.

#include <string>

#include "exforge/bitstring.hpp"
#include "exforge/distrib.hpp"
#include "exforge/gf2x.hpp"

namespace exforge {

struct IPCfg {
  std::size_t n = 0, m = 0;
  std::size_t pad = 0;  // zeros appended so that m divides n + pad
  std::shared_ptr<const gf2::WideField> field;

  static IPCfg make(std::size_t n, std::size_t m) {
    if (m < 1) throw PlanViolation("inner product output must be at least 1 bit");
    if (n < m) throw PlanViolation("inner product over " + std::to_string(n) + " bits cannot give " + std::to_string(m));
    IPCfg c;
    c.n = n;
    c.m = m;
    c.pad = (m - n % m) % m;
    c.field = gf2::wide_field(m);
    return c;
  }

  std::size_t blocks() const { return (n + pad) / m; }

  // 2^(-(k1 + k2 - n - m - 1)/2) on the padded length.
  Rational error_bound_sq(std::size_t k1, std::size_t k2) const {
    return pow2(-(long(k1) + long(k2) - long(n + pad) - long(m) - 1));
  }
};

inline BitString ip_extract(const IPCfg& c, const BitString& x, const BitString& y) {
  if (x.size() != c.n || y.size() != c.n)
    throw LengthMismatch("inner product inputs of " + std::to_string(x.size()) + " and " + std::to_string(y.size()) +
                         " bits, cfg says " + std::to_string(c.n));
  const auto& f = *c.field;
  if (c.m <= 64) {
    gf2::u64 acc = 0;
    for (std::size_t i = 0; i < c.blocks(); ++i) {
      std::size_t s = i * c.m, len = std::min(c.m, c.n - s);
      gf2::u64 a = x.read_uint(s, len) << (c.m - len), b = y.read_uint(s, len) << (c.m - len);
      acc ^= f.mul_u64(a, b);
    }
    return BitString::from_uint(acc, c.m);
  }
  BitString acc(c.m);
  for (std::size_t i = 0; i < c.blocks(); ++i) {
    std::size_t s = i * c.m, len = std::min(c.m, c.n - s);
    acc ^= f.mul(x.slice(s, len).resized(c.m), y.slice(s, len).resized(c.m));
  }
  return acc;
}

}  // namespace exforge
