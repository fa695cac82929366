#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "exforge/distrib.hpp"
#include "exforge/iext.hpp"

using namespace exforge;

TEST(IExt, Shape) {
  auto c = IExtCfg::make(20, 10);
  EXPECT_EQ(c.t, 10u);
  EXPECT_EQ(c.out, 3u);
  EXPECT_EQ(c.r1, 1u);
  auto c2 = IExtCfg::make(40, 25);
  EXPECT_EQ(c2.t, 23u);
  EXPECT_EQ(c2.out, 7u);
  EXPECT_EQ(c2.r1, 2u);
  EXPECT_THROW(IExtCfg::make(20, 9), PlanViolation);
  EXPECT_THROW(IExtCfg::make(9, 10), PlanViolation);
  EXPECT_THROW(iext_extract(c, BitString(19), BitString(10)), LengthMismatch);
}

TEST(IExt, ZeroSourceGivesZero) {
  auto c = IExtCfg::make(20, 10);
  for (std::uint64_t r = 0; r < 1024; ++r) ASSERT_TRUE(iext_extract(c, BitString(20), BitString::from_uint(r, 10)).is_zero());
}

TEST(IExt, MatchesFieldOracle) {
  // Independent recomputation: gather the sampled bits, multiply with the
  // small-field code path, keep the low 3 coefficients.
  auto c = IExtCfg::make(20, 10);
  auto f = gf2::wide_field(10);
  Rng rng(1);
  for (int t = 0; t < 300; ++t) {
    BitString x = rng.bits(20), r = rng.bits(10);
    auto pos = sample_distinct(r.slice(0, 1), 20, 10);
    std::uint64_t xs = 0;
    for (auto p : pos) xs = (xs << 1) | std::uint64_t(x.get(p));
    std::uint64_t m = (r.read_uint(1, 9) << 1) | 1;
    ASSERT_EQ(iext_extract(c, x, r).to_uint(), f->mul_u64(m, xs) & 7u);
  }
}

TEST(IExt, LinearOnBasis) {
  auto c = IExtCfg::make(20, 10);
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    BitString r = rng.bits(10);
    std::vector<BitString> img;
    for (std::size_t j = 0; j < 20; ++j) {
      BitString e(20);
      e.set(j, true);
      img.push_back(iext_extract(c, e, r));
    }
    for (int k = 0; k < 20; ++k) {
      BitString x = rng.bits(20), want(3);
      for (std::size_t j = 0; j < 20; ++j)
        if (x.get(j)) want ^= img[j];
      ASSERT_EQ(iext_extract(c, x, r), want);
    }
  }
}

TEST(IExt, FullRankForEverySeed) {
  auto c = IExtCfg::make(20, 10);
  for (std::uint64_t r = 0; r < 1024; ++r) ASSERT_EQ(gf2_rank(iext_matrix(c, BitString::from_uint(r, 10))), 3u) << r;
}

TEST(IExt, FiberSizesByEnumeration) {
  auto c = IExtCfg::make(14, 10);
  for (std::uint64_t r = 0; r < 1024; r += 37) {
    BitString rs = BitString::from_uint(r, 10);
    std::vector<std::size_t> count(8, 0);
    for (std::uint64_t x = 0; x < (1u << 14); ++x) count[iext_extract(c, BitString::from_uint(x, 14), rs).to_uint()]++;
    for (auto k : count) ASSERT_EQ(k, std::size_t(1) << 11);
  }
}

TEST(IExt, InvertRoundTrip) {
  auto c = IExtCfg::make(14, 10);
  Rng rng(3);
  for (std::uint64_t r = 0; r < 1024; ++r)
    for (std::uint64_t s = 0; s < 8; ++s) {
      BitString rs = BitString::from_uint(r, 10), sv = BitString::from_uint(s, 3);
      ASSERT_EQ(iext_extract(c, iext_invert(c, sv, rs, rng), rs), sv);
    }
}

TEST(IExt, InvertIsUniformOnFiber) {
  auto c = IExtCfg::make(12, 10);  // fiber of 2^9 points
  Rng rng(4);
  BitString rs = BitString::from_string("1011001110"), s = BitString::from_string("101");
  std::map<BitString, int> hist;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) hist[iext_invert(c, s, rs, rng)]++;
  ASSERT_EQ(hist.size(), 512u);
  double e = draws / 512.0, chi = 0;
  for (auto& [x, k] : hist) chi += (k - e) * (k - e) / e;
  // 511 dof: mean 511, sd ~32; p = 0.01 upper critical value ~ 587.3
  EXPECT_LT(chi, 587.3);
}

TEST(IExt, AllZeroBlockIsInFiber) {
  auto c = IExtCfg::make(14, 10);
  EXPECT_TRUE(iext_extract(c, BitString(14), BitString::from_uint(77, 10)).is_zero());
}

TEST(SampleDistinct, Basics) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    BitString s = rng.bits(7);
    std::size_t n = 1 + rng.below(300), k = rng.below(n + 1);
    auto p = sample_distinct(s, n, k);
    ASSERT_EQ(p.size(), k);
    ASSERT_EQ(std::set<std::size_t>(p.begin(), p.end()).size(), k);
    ASSERT_TRUE(std::is_sorted(p.begin(), p.end()));
    if (k) ASSERT_LT(p.back(), n);
    ASSERT_EQ(sample_distinct(s, n, k), p);
  }
  auto all = sample_distinct(BitString::from_string("1"), 9, 9);
  EXPECT_EQ(all.size(), 9u);
  EXPECT_THROW(sample_distinct(BitString(3), 4, 5), CountExceedsUniverse);
}

// For f: [n] -> {0,1}, the fraction of 12-bit seeds whose sample mean falls
// more than theta below the true mean, against the Hoeffding bound for
// sampling without replacement, exp(-2 t theta^2).
TEST(SampleDistinct, AveragingProperty) {
  const std::size_t n = 200, t = 40;
  const double theta = 0.15;
  Rng rng(6);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> f(n);
    double mu = 0;
    for (auto& v : f) {
      v = double(rng.coin());  // 0/1 test functions have the widest spread
      mu += v;
    }
    mu /= n;
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < 4096; ++s) {
      double m = 0;
      for (auto p : sample_distinct(BitString::from_uint(s, 12), n, t)) m += f[p];
      bad += m / t < mu - theta;
    }
    worst = std::max(worst, bad / 4096.0);
  }
  std::cout << "sampler worst deviation fraction=" << worst << "\n";
  EXPECT_LE(worst, std::exp(-2 * t * theta * theta));
}

// (IExt(X, R), R) against (U, R) for nested flat sources on 12 bits.
TEST(IExt, StrongOnFlatSources) {
  auto c = IExtCfg::make(12, 10);
  Rng rng(7);
  FlatSource big = FlatSource::uniform(12);
  std::vector<BitString> pts = big.support();
  for (std::size_t i = pts.size() - 1; i > 0; --i) std::swap(pts[i], pts[rng.below(i + 1)]);
  double prev = 1;
  for (std::size_t k : {8u, 10u, 11u, 12u}) {
    FlatSource s(12, std::vector<BitString>(pts.begin(), pts.begin() + (std::size_t(1) << k)));
    EvalSpec spec;
    spec.sources = {s, FlatSource::uniform(10)};
    spec.sides = {1};
    auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return iext_extract(c, v[0], v[1]); }, spec);
    double sd = to_double(distance_from_uniform_prefix(j, 3));
    std::cout << "iext k=" << k << " sd=" << sd << "\n";
    EXPECT_LE(sd, prev);
    prev = sd;
  }
  EXPECT_EQ(prev, 0.0);  // full-rank linear map of a uniform source
}
