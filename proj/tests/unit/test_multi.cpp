#include <gtest/gtest.h>

#include <iostream>

#include "exforge/distrib.hpp"
#include "exforge/multi.hpp"

using namespace exforge;

namespace {
Nm2Cfg nm2() { return Nm2Cfg::make(152, 16, 8, 104, 16, 16); }

Tamperer swap_to(const BitString& from, const BitString& to) {
  return Tamperer("advice", from.size(), [from, to](const BitString& s) { return s == from ? to : s; }, false);
}
}  // namespace

TEST(Multi, PluginContract) {
  auto p = nm2_plugin(nm2());
  EXPECT_EQ(p.s, 2u);
  EXPECT_EQ(p.n, 152u);
  EXPECT_EQ(p.m, 3u);
  EXPECT_THROW(p({BitString(152)}), LengthMismatch);
  EXPECT_THROW(p({BitString(152), BitString(151)}), LengthMismatch);
  auto stub = ten_source_stub(40, 4);
  EXPECT_EQ(stub.s, 10u);
  EXPECT_THROW(stub(std::vector<BitString>(10, BitString(40))), NotImplemented);
  EXPECT_THROW(MultiCfg::make(3, 1, 8, 144, p), PlanViolation);
  EXPECT_THROW(MultiCfg::make(2, 1, 8, 100, p), PlanViolation);  // slice 144 > 100
}

TEST(Multi, SingleIterationIsOnePluginCall) {
  auto p = nm2_plugin(nm2());
  auto c = MultiCfg::make(2, 1, 8, 150, p);
  EXPECT_EQ(c.vlen, 144u);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    BitString x1 = rng.bits(150), x2 = rng.bits(150), a = rng.bits(8);
    EXPECT_EQ(multi_adv_cb(c, p, {x1, x2}, a), p({x1.slice(0, 144).concat(a), x2.slice(0, 144).concat(a)}));
  }
}

TEST(Multi, ZeroSourcesAndAdviceGiveZero) {
  auto p = ip_plugin(40, 4);
  auto c = MultiCfg::make(2, 3, 8, 64, p);
  EXPECT_EQ(multi_adv_cb(c, p, {BitString(64), BitString(64)}, BitString(8)), BitString(4));
}

TEST(Multi, ConsumedBitsLedger) {
  auto p = ip_plugin(40, 4);
  auto c = MultiCfg::make(2, 3, 8, 64, p);
  std::vector<std::size_t> used;
  Rng rng(2);
  multi_adv_cb(c, p, {rng.bits(64), rng.bits(64)}, rng.bits(8), &used);
  ASSERT_EQ(used.size(), 3u);
  for (std::size_t l = 1; l <= 3; ++l) {
    EXPECT_EQ(used[l - 1], l * 4 * 32);
    EXPECT_LE(double(used[l - 1]), double(l * (c.t + 1)) * double(c.a) / c.gamma() + 1e-9);
  }
  // 64 < 2 * 16 * 32: the toy sits below the entropy requirement.
  EXPECT_FALSE(c.ledger()[0].holds());
}

TEST(Multi, SwappingPluginsKeepsShapeAndLedger) {
  auto a = nm2_plugin(nm2());
  auto b = ip_plugin(152, 3);
  auto ca = MultiCfg::make(2, 2, 8, 150, a), cb = MultiCfg::make(2, 2, 8, 150, b);
  EXPECT_EQ(ca.vlen, cb.vlen);
  EXPECT_EQ(ca.ledger()[0].rhs, cb.ledger()[0].rhs);
  Rng rng(3);
  int differ = 0;
  for (int i = 0; i < 20; ++i) {
    BitString x1 = rng.bits(150), x2 = rng.bits(150), al = rng.bits(8);
    std::vector<std::size_t> ua, ub;
    auto oa = multi_adv_cb(ca, a, {x1, x2}, al, &ua), ob = multi_adv_cb(cb, b, {x1, x2}, al, &ub);
    EXPECT_EQ(oa.size(), ob.size());
    EXPECT_EQ(ua, ub);
    differ += oa != ob;
  }
  EXPECT_GT(differ, 0);
}

// s = 2, t = 2. Round 1 flips a bit of X_1 and changes the advice, round 2
// only changes the advice. Outcome (Z, Z^1, Z^2, X_1), exhaustive over flat
// 2^6 x 2^6 sources. The control reads every advice as zeros, so in round 2
// it repeats Z exactly.
TEST(Multi, IteratedBreakerVersusControl) {
  auto c = MultiCfg::make(2, 2, 8, 144, nm2_plugin(nm2()));
  auto nm2c = nm2();
  nm2c.adv.ignore_advice = true;
  auto cc = MultiCfg::make(2, 2, 8, 144, nm2_plugin(nm2c));
  cc.ignore_advice = true;
  Rng rng(4);
  FlatSource X1 = FlatSource::random(144, 6, rng), X2 = FlatSource::random(144, 6, rng);
  BitString a0 = BitString::from_string("00010111"), a1 = BitString::from_string("10010111"),
            a2 = BitString::from_string("00010110");
  auto t1 = swap_to(a0, a1), t2 = swap_to(a0, a2);
  auto f = Tamperer::flip(144, 3);
  auto run = [&](const MultiCfg& cfg) {
    auto p = nm2_plugin(cfg.ignore_advice ? nm2c : nm2());
    EvalSpec spec;
    spec.sources = {X1, X2, FlatSource(8, {a0})};
    spec.rounds = {{&f, nullptr, &t1}, {nullptr, nullptr, &t2}};
    spec.sides = {0};
    auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return multi_adv_cb(cfg, p, {v[0], v[1]}, v[2]); }, spec);
    return to_double(distance_from_uniform_prefix(j, 3));
  };
  double real = run(c), base = run(cc);
  std::cout << "multi t=2 real=" << real << " control=" << base << "\n";
  EXPECT_LT(real, base);
}

TEST(Tnm, ShapeAndLedger) {
  auto p = nm2_plugin(nm2());
  auto c = TnmCfg::make(1, 1, 40, 32, 300, 8, 1, p);
  EXPECT_EQ(c.gen.a(), 17u);
  EXPECT_EQ(c.d4, 17u);
  EXPECT_EQ(c.d5, 102u);
  EXPECT_EQ(c.m1, 150u);
  EXPECT_EQ(c.multi.vlen, 135u);
  EXPECT_EQ(c.multi.s, 2u);
  EXPECT_EQ(c.out(), 3u);
  Rng rng(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(seeded_tnm_extract(c, p, {rng.bits(40)}, rng.bits(300)).size(), c.out());
  auto led = c.ledger(0.25);
  EXPECT_TRUE(led[0].holds());
  EXPECT_NE(first_failure(led), nullptr);
  EXPECT_THROW(seeded_tnm_extract(c, p, {rng.bits(40), rng.bits(40)}, rng.bits(300)), PlanViolation);
  EXPECT_THROW(TnmCfg::make(1, 1, 40, 32, 300, 8, 1, ip_plugin(16, 3)), PlanViolation);
}

// One tampered seed, strong in the seed: (V, V', Y, Y') vs (U, V', Y, Y').
TEST(Tnm, SeedTamperingSmoke) {
  auto p = nm2_plugin(nm2());
  auto c = TnmCfg::make(1, 1, 40, 32, 300, 8, 1, p);
  Rng rng(6);
  FlatSource X = FlatSource::random(40, 10, rng), Y = FlatSource::random(300, 3, rng);
  auto f = Tamperer::flip(300, 200);
  EvalSpec spec;
  spec.sources = {X, Y};
  spec.rounds = {{nullptr, &f}};
  spec.sides = {1};
  auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return seeded_tnm_extract(c, p, {v[0]}, v[1]); }, spec);
  double sd = to_double(distance_from_uniform_prefix(j, 3));
  std::cout << "tnm smoke sd=" << sd << "\n";
  EXPECT_LE(sd, 0.2);
}
