#include <gtest/gtest.h>

#include "exforge/distrib.hpp"
#include "exforge/laext.hpp"

using namespace exforge;

TEST(AltExt, SingleStepIsOneExtraction) {
  Rng rng(1);
  auto c = AltExtCfg::make(1, 4, 20, 12);
  for (int t = 0; t < 50; ++t) {
    BitString w = rng.bits(20), q = rng.bits(12), s1 = rng.bits(4);
    auto r = la_ext(c, w, q, s1);
    ASSERT_EQ(r.size(), 1u);
    ASSERT_EQ(r[0], lhl_extract(c.ext_w, w, s1));
  }
}

TEST(AltExt, ZeroWendyGivesZeroTranscript) {
  Rng rng(2);
  auto c = AltExtCfg::make(4, 5, 30, 30);
  for (auto& r : la_ext(c, BitString(30), rng.bits(30))) EXPECT_TRUE(r.is_zero());
}

TEST(AltExt, ThreeStepsMatchStraightLineOracle) {
  Rng rng(3);
  auto c = AltExtCfg::make(3, 6, 40, 24);
  auto ew = SeededExtCfg::lhl(40, 6, 6, 6), eq = SeededExtCfg::lhl(24, 6, 6, 6);
  for (int t = 0; t < 100; ++t) {
    BitString w = rng.bits(40), q = rng.bits(24), s1 = q.slice(0, 6);
    BitString r1 = lhl_extract(ew, w, s1);
    BitString s2 = lhl_extract(eq, q, r1);
    BitString r2 = lhl_extract(ew, w, s2);
    BitString s3 = lhl_extract(eq, q, r2);
    BitString r3 = lhl_extract(ew, w, s3);
    ASSERT_EQ(la_ext(c, w, q), (std::vector<BitString>{r1, r2, r3}));
  }
}

TEST(AltExt, LengthChecks) {
  auto c = AltExtCfg::make(2, 4, 20, 12);
  EXPECT_THROW(la_ext(c, BitString(20), BitString(12), BitString(3)), LengthMismatch);
  EXPECT_THROW(la_ext(c, BitString(19), BitString(12), BitString(4)), LengthMismatch);
  EXPECT_THROW(AltExtCfg::make(0, 4, 20, 12), PlanViolation);
}

TEST(AltExt, Deterministic) {
  Rng rng(4);
  auto c = AltExtCfg::make(3, 4, 20, 12);
  BitString w = rng.bits(20), q = rng.bits(12);
  EXPECT_EQ(la_ext(c, w, q), la_ext(c, w, q));
}

// Regression pins for 2-bit messages: with probability 1/4 a seed repeats
// and the next block is a copy of one already seen.
constexpr double kLookAheadPin[2] = {0.29, 0.55};

// R_{j+1} given the transcript so far, and the transcript of a tampered Q,
// with W uniform and independent of (Q, Q').
TEST(AltExt, LookAheadProxy) {
  const std::size_t s = 2, nw = 10, nq = 8;
  Rng rng(5);
  auto lib = tamperer_library(nq);
  for (std::size_t steps = 2; steps <= 3; ++steps) {
    auto c = AltExtCfg::make(steps, s, nw, nq);
    for (const Tamperer* f : {&lib[0], &lib[nq]}) {
      for (std::size_t j = 0; j + 1 < steps; ++j) {
        std::vector<BitString> outcomes;
        for (std::uint64_t qv = 0; qv < (1u << nq); ++qv) {
          BitString q = BitString::from_uint(qv, nq), qt = (*f)(q);
          for (std::uint64_t wv = 0; wv < (1u << nw); ++wv) {
            BitString w = BitString::from_uint(wv, nw);
            auto r = la_ext(c, w, q), rt = la_ext(c, w, qt);
            // R_{j+1} ahead of S_1..S_{j+1} and R_1..R_j on both sides
            BitString o = r[j + 1].concat(q.slice(0, s)).concat(qt.slice(0, s));
            for (std::size_t i = 0; i <= j; ++i) o = o.concat(r[i]).concat(rt[i]);
            for (std::size_t i = 1; i <= j; ++i)
              o = o.concat(lhl_extract(c.ext_q, q, r[i - 1])).concat(lhl_extract(c.ext_q, qt, rt[i - 1]));
            outcomes.push_back(std::move(o));
          }
        }
        JointDist dist(outcomes[0].size());
        for (auto& o : outcomes) dist.add(o);
        double sd = to_double(distance_from_uniform_prefix(dist, s));
        std::cout << "look-ahead steps=" << steps << " j=" << j << " f=" << f->id << " sd=" << sd << "\n";
        EXPECT_LE(sd, kLookAheadPin[j]);
      }
    }
  }
}

TEST(Nipm, SingleRowIsPrefix) {
  Rng rng(6);
  auto c = NipmCfg::make(1, 12, 16);
  for (int t = 0; t < 20; ++t) {
    BitString row = rng.bits(12);
    EXPECT_EQ(nipm(c, {row}, rng.bits(16)), row.slice(0, 2));
  }
}

TEST(Nipm, OutputLength) {
  for (std::size_t m : {5u, 6u, 9u, 10u, 23u, 40u}) {
    auto c = NipmCfg::make(3, m, 20);
    Rng rng(m);
    EXPECT_EQ(nipm(c, {rng.bits(m), rng.bits(m), rng.bits(m)}, rng.bits(20)).size(), m / 5) << m;
  }
  EXPECT_THROW(NipmCfg::make(2, 4, 20), PlanViolation);
}

TEST(Nipm, RowChecks) {
  auto c = NipmCfg::make(2, 10, 16);
  EXPECT_THROW(nipm(c, {BitString(10)}, BitString(16)), RowLengthMismatch);
  EXPECT_THROW(nipm(c, {BitString(10), BitString(9)}, BitString(16)), RowLengthMismatch);
  EXPECT_THROW(nipm(c, {BitString(10), BitString(10)}, BitString(15)), LengthMismatch);
}

TEST(Nipm, LedgerInequalities) {
  auto c = NipmCfg::make(2, 6, 8);
  EXPECT_EQ(c.ledger_failure(1, 0.5, 8), "m >= 4cL log(d/eps)");
  auto big = NipmCfg::make(2, 400, 64);
  EXPECT_EQ(big.ledger_failure(1, 0.01, 200), "");
  EXPECT_EQ(big.ledger_failure(1, 0.01, 10), "d' >= 4cL log(m/eps)");
}

namespace {

// (N, N', Y, Y') for rows (X_0, X_1), seed Y; the tampered copy keeps X_0,
// replaces X_1 by a constant and flips Y.
Rational merger_distance(const std::function<BitString(const std::vector<BitString>&, const BitString&)>& merge,
                         std::size_t good_row) {
  auto id = Tamperer("id", 6, [](const BitString& v) { return v; }, false);
  auto zero = Tamperer("zero", 6, [](const BitString&) { return BitString(6); }, false);
  auto flip = Tamperer::flip(8, 3);
  EvalSpec spec;
  spec.sources = {FlatSource::uniform(6), FlatSource::uniform(6), FlatSource::uniform(8)};
  spec.rounds = {{good_row == 0 ? &zero : &id, good_row == 1 ? &zero : &id, &flip}};
  spec.sides = {2};
  auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return merge({v[0], v[1]}, v[2]); }, spec);
  return distance_from_uniform_prefix(j, 1);
}

}  // namespace

TEST(Nipm, IndependencePreservingAgainstControl) {
  auto c = NipmCfg::make(2, 6, 8);
  auto real = [&](const std::vector<BitString>& rows, const BitString& y) { return nipm(c, rows, y); };
  auto control = [&](const std::vector<BitString>& rows, const BitString&) {
    return rows[0].concat(rows[1]).slice(0, c.m1());
  };
  // Second row independent of its copy: the merged bit is exactly uniform,
  // the prefix control copies the shared first row.
  Rational sd = merger_distance(real, 1), sc = merger_distance(control, 1);
  EXPECT_EQ(sd, 0);
  EXPECT_EQ(sc, Rational(1, 2));
  // First row independent: with 1-bit messages the seeds agree half the
  // time and the shared second row leaks through. Recorded, not a guarantee.
  EXPECT_EQ(merger_distance(real, 0), Rational(3, 8));
  EXPECT_EQ(merger_distance(control, 0), 0);
}
