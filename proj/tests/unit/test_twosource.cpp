#include <gtest/gtest.h>

#include "exforge/gf.hpp"
#include "exforge/seeded.hpp"
#include "exforge/twosource.hpp"

using namespace exforge;

namespace {

// Blockwise sum of products computed with the small-field table code.
BitString ip_oracle(const BitString& x, const BitString& y, std::size_t m) {
  auto f = FieldCtx::canonical(unsigned(m));
  Sym acc = 0;
  for (std::size_t s = 0; s < x.size(); s += m) {
    std::size_t len = std::min(m, x.size() - s);
    acc ^= f->mul(Sym(x.slice(s, len).resized(m).to_uint()), Sym(y.slice(s, len).resized(m).to_uint()));
  }
  return BitString::from_uint(acc, m);
}

}  // namespace

TEST(InnerProduct, MatchesTableOracle) {
  Rng rng(1);
  for (auto [n, m] : std::vector<std::pair<int, int>>{{12, 2}, {12, 5}, {31, 15}, {64, 16}, {45, 9}}) {
    auto c = IPCfg::make(n, m);
    for (int t = 0; t < 300; ++t) {
      BitString x = rng.bits(n), y = rng.bits(n);
      ASSERT_EQ(ip_extract(c, x, y), ip_oracle(x, y, m)) << n << "," << m;
    }
  }
}

TEST(InnerProduct, SymmetricAndBilinear) {
  Rng rng(2);
  auto c = IPCfg::make(150, 70);  // wide path
  for (int t = 0; t < 30; ++t) {
    BitString x = rng.bits(150), y = rng.bits(150), z = rng.bits(150);
    ASSERT_EQ(ip_extract(c, x, y), ip_extract(c, y, x));
    ASSERT_EQ(ip_extract(c, x ^ z, y), ip_extract(c, x, y) ^ ip_extract(c, z, y));
  }
}

TEST(InnerProduct, ConfigChecks) {
  EXPECT_THROW(IPCfg::make(4, 5), PlanViolation);
  EXPECT_THROW(IPCfg::make(4, 0), PlanViolation);
  auto c = IPCfg::make(12, 5);
  EXPECT_EQ(c.pad, 3u);
  EXPECT_THROW(ip_extract(c, BitString(12), BitString(11)), LengthMismatch);
  // k1 = k2 = 10, n = 12, m = 2: 2^-(20 - 12 - 2 - 1) = 2^-5
  EXPECT_EQ(IPCfg::make(12, 2).error_bound_sq(10, 10), Rational(1, 32));
}

TEST(InnerProduct, StrongOnBothSides) {
  Rng rng(3);
  auto c = IPCfg::make(12, 2);
  ErrorBound bound = ErrorBound::sqrt_of(c.error_bound_sq(10, 10));
  for (int t = 0; t < 3; ++t) {
    for (std::size_t side : {0u, 1u}) {
      EvalSpec spec;
      spec.sources = {FlatSource::random(12, 10, rng), FlatSource::random(12, 10, rng)};
      spec.sides = {side};
      auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return ip_extract(c, v[0], v[1]); }, spec);
      Rational sd = distance_from_uniform_prefix(j, 2);
      EXPECT_TRUE(bound.admits(sd)) << to_fraction(sd);
    }
  }
}
