#include <gtest/gtest.h>

#include <set>

#include "exforge/rs.hpp"

using namespace exforge;

TEST(ReedSolomon, ZeroAndConstantMessages) {
  RSCode c(3, 3, 7);
  EXPECT_EQ(rs_encode(c, std::vector<Sym>{0, 0, 0}), std::vector<Sym>(7, 0));
  EXPECT_EQ(rs_encode(c, std::vector<Sym>{5, 0, 0}), std::vector<Sym>(7, 5));
  EXPECT_THROW(rs_encode(c, std::vector<Sym>{1, 2}), LengthMismatch);
  EXPECT_THROW(RSCode(3, 3, 9), RangeError);
}

TEST(ReedSolomon, EvaluatesPolynomialAtCanonicalPoints) {
  auto f = FieldCtx::canonical(4);
  RSCode c(4, 3, 16);
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<Sym> m{Sym(rng.below(16)), Sym(rng.below(16)), Sym(rng.below(16))};
    auto cw = rs_encode(c, m);
    for (Sym p = 0; p < 16; ++p) ASSERT_EQ(cw[p], m[0] ^ f->mul(m[1], p) ^ f->mul(m[2], f->mul(p, p)));
  }
}

TEST(ReedSolomon, MinimumDistanceExhaustive) {
  for (std::size_t n0 = 1; n0 <= 3; ++n0)
    for (std::size_t n = n0; n <= 7; ++n) {
      RSCode c(3, n0, n);
      std::vector<std::vector<Sym>> words;
      std::size_t total = std::size_t(1) << (3 * n0);
      for (std::size_t v = 0; v < total; ++v) {
        std::vector<Sym> m(n0);
        for (std::size_t j = 0; j < n0; ++j) m[j] = Sym((v >> (3 * j)) & 7);
        words.push_back(rs_encode(c, m));
      }
      std::size_t best = n + 1;
      for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) {
          std::size_t dist = 0;
          for (std::size_t p = 0; p < n; ++p) dist += words[i][p] != words[j][p];
          best = std::min(best, dist);
        }
      if (total > 1) EXPECT_EQ(best, n - n0 + 1) << n0 << "/" << n;
    }
}

TEST(ReedSolomon, FieldElementOverload) {
  RSCode c(3, 2, 4);
  auto f = c.field;
  auto cw = rs_encode(c, std::vector<FieldElement>{FieldElement(f, 1), FieldElement(f, 2)});
  ASSERT_EQ(cw.size(), 4u);
  EXPECT_EQ(cw[0].value(), 1u);
  EXPECT_EQ(cw[1].value(), 3u);
}

TEST(Sampling, DistinctDeterministicAndFilled) {
  BitString z = BitString::from_string("0011" "0011" "1011" "0001");
  auto p = sample_positions(z, 4, 10, 4);
  // 3, 3 (skip), 11 mod 10 = 1, 1 (skip); fill from the smallest unused: 0, 2
  EXPECT_EQ(p, (std::vector<std::size_t>{3, 1, 0, 2}));
  EXPECT_EQ(sample_positions(z, 4, 10, 4), p);
  EXPECT_THROW(sample_positions(z, 4, 10, 5), InsufficientSeed);
  EXPECT_THROW(sample_positions(BitString(64), 4, 3, 4), CountExceedsUniverse);
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    auto q = sample_positions(rng.bits(40), 5, 20, 8);
    ASSERT_EQ(std::set<std::size_t>(q.begin(), q.end()).size(), 8u);
  }
}

TEST(Sampling, FullCountTakesWholeCodeword) {
  RSCode c(3, 2, 8);
  Rng rng(3);
  auto cw = rs_encode(c, std::vector<Sym>{3, 6});
  BitString z = rng.bits(24);
  auto p = sample_positions(z, 3, 8, 8);
  EXPECT_EQ(std::set<std::size_t>(p.begin(), p.end()).size(), 8u);
  EXPECT_EQ(sample_symbols(z, cw, 3, 8).size(), 24u);
  EXPECT_EQ(sample_rs_symbols(c, {3, 6}, z, 8), sample_symbols(z, cw, 3, 8));
}

// Codeword pairs far apart are told apart by almost every z.
TEST(Sampling, CollisionDetectionPower) {
  RSCode c(4, 2, 16);  // distance 15
  Rng rng(4);
  for (std::size_t count : {1u, 2u, 3u}) {
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
      std::vector<Sym> a{Sym(rng.below(16)), Sym(rng.below(16))}, b = a;
      b[1] ^= Sym(1 + rng.below(15));
      auto ca = rs_encode(c, a), cb = rs_encode(c, b);
      std::size_t same = 0, total = std::size_t(1) << (4 * count);
      for (std::size_t v = 0; v < total; ++v) {
        BitString z = BitString::from_uint(v, 4 * count);
        same += sample_symbols(z, ca, 4, count) == sample_symbols(z, cb, 4, count);
      }
      worst = std::max(worst, double(same) / double(total));
    }
    // Codewords agree in at most one place; a second distinct sample always differs.
    EXPECT_LE(worst, count == 1 ? 1.0 / 16 : 0.0) << count;
  }
}
