#pragma once

// Invertible linear seeded extractor: sample t distinct source bits with the
// first part of the seed, multiply by the rest of the seed in GF(2^t), keep
// the low-order end of the product.

#include <algorithm>
#include <string>
#include <vector>

#include "exforge/bitstring.hpp"
#include "exforge/gf2x.hpp"
#include "exforge/rng.hpp"

namespace exforge {

struct IExtCfg {
  std::size_t n = 0, d = 0;
  std::size_t t = 0;    // floor(0.9d) + 1 sampled bits
  std::size_t out = 0;  // floor(0.3d)
  std::size_t r1 = 0;   // floor(0.1d) sampler-seed bits
  std::shared_ptr<const gf2::WideField> field;

  static IExtCfg make(std::size_t n, std::size_t d) {
    IExtCfg c;
    c.n = n;
    c.d = d;
    c.t = 9 * d / 10 + 1;
    c.out = 3 * d / 10;
    c.r1 = d / 10;
    if (c.r1 < 1 || c.out < 1) throw PlanViolation("seed of " + std::to_string(d) + " bits leaves no sampler seed (need d >= 10)");
    if (c.t > n) throw PlanViolation("t = 0.9d+1 = " + std::to_string(c.t) + " exceeds n = " + std::to_string(n));
    c.field = gf2::wide_field(c.t);
    return c;
  }

  // R_2' = first t-1 bits of R_2, then a 1. Equals R_2 || 1 when 0.9d is whole.
  BitString multiplier(const BitString& rseed) const {
    return rseed.slice(r1, t - 1).concat(BitString::ones(1));
  }
};

namespace detail {

inline std::uint64_t seed_key(const BitString& seed) {
  std::uint64_t k = splitmix64(0x1e7ull ^ seed.size());
  for (std::size_t s = 0; s < seed.size(); s += 64) k = splitmix64(k ^ seed.read_uint(s, 64));
  return k;
}

// Balanced Feistel network on 2b bits, 6 rounds.
inline std::uint64_t feistel(std::uint64_t v, unsigned half, std::uint64_t key) {
  std::uint64_t mask = (std::uint64_t(1) << half) - 1;
  std::uint64_t l = v >> half, r = v & mask;
  for (std::uint64_t round = 0; round < 6; ++round) {
    std::uint64_t f = splitmix64(key ^ (round << 56) ^ r) & mask;
    std::uint64_t nl = r;
    r = l ^ f;
    l = nl;
  }
  return (l << half) | r;
}

}  // namespace detail

// t distinct positions in [n], sorted: the first t images of a keyed
// permutation of [n] (Feistel on the enclosing power of 4, cycle-walked).
inline std::vector<std::size_t> sample_distinct(const BitString& seed, std::size_t n, std::size_t t) {
  if (t > n) throw CountExceedsUniverse(std::to_string(t) + " distinct samples from " + std::to_string(n));
  if (t == n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  unsigned half = 1;
  while ((std::uint64_t(1) << (2 * half)) < n) ++half;
  std::uint64_t key = detail::seed_key(seed);
  std::vector<std::size_t> pos;
  pos.reserve(t);
  for (std::uint64_t i = 0; pos.size() < t; ++i) {
    std::uint64_t v = i;
    do v = detail::feistel(v, half, key);
    while (v >= n);
    pos.push_back(std::size_t(v));
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

inline BitString iext_extract(const IExtCfg& c, const BitString& x, const BitString& rseed) {
  if (x.size() != c.n || rseed.size() != c.d)
    throw LengthMismatch("IExt inputs of " + std::to_string(x.size()) + " and " + std::to_string(rseed.size()) +
                         " bits, cfg says " + std::to_string(c.n) + " and " + std::to_string(c.d));
  auto pos = sample_distinct(rseed.slice(0, c.r1), c.n, c.t);
  BitString xs(c.t);
  for (std::size_t i = 0; i < c.t; ++i) xs.set(i, x.get(pos[i]));
  return c.field->mul(c.multiplier(rseed), xs).slice(c.t - c.out, c.out);
}

// Uniform element of {x : iext_extract(x, rseed) = s}: free product bits and
// unsampled source bits are uniform, the multiplier is inverted exactly.
inline BitString iext_invert(const IExtCfg& c, const BitString& s, const BitString& rseed, Rng& rng) {
  if (s.size() != c.out) throw LengthMismatch("IExt output of " + std::to_string(s.size()) + " bits, cfg says " + std::to_string(c.out));
  if (rseed.size() != c.d) throw LengthMismatch("IExt seed length");
  auto pos = sample_distinct(rseed.slice(0, c.r1), c.n, c.t);
  BitString prod = rng.bits(c.t - c.out).concat(s);
  BitString xs = c.field->mul(c.field->inv(c.multiplier(rseed)), prod);
  BitString x = rng.bits(c.n);
  for (std::size_t i = 0; i < c.t; ++i) x.set(pos[i], xs.get(i));
  return x;
}

// Rank over GF(2) of a list of equal-length rows.
inline std::size_t gf2_rank(std::vector<BitString> rows) {
  std::size_t r = 0;
  if (rows.empty()) return 0;
  std::size_t cols = rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && !rows[p].get(c)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
    ++r;
  }
  return r;
}

// The out x n matrix of x -> iext_extract(x, rseed); row i gives output bit i.
inline std::vector<BitString> iext_matrix(const IExtCfg& c, const BitString& rseed) {
  std::vector<BitString> rows(c.out, BitString(c.n));
  for (std::size_t j = 0; j < c.n; ++j) {
    BitString e(c.n);
    e.set(j, true);
    BitString col = iext_extract(c, e, rseed);
    for (std::size_t i = 0; i < c.out; ++i) rows[i].set(j, col.get(i));
  }
  return rows;
}

}  // namespace exforge
