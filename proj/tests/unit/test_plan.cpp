#include <gtest/gtest.h>

#include "exforge/plan.hpp"

using namespace exforge;

namespace {
const Rational kEps = pow2(-20);
constexpr std::size_t kN = std::size_t(1) << 30;

std::string infeasible_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const Infeasible& e) {
    return e.inequality;
  }
  return "";
}
}  // namespace

TEST(Plan, AsymptoticProfilesSatisfyTheirLedger) {
  for (auto prof : {"seeded-nm", "two-source-nm", "multi"}) {
    auto p = plan_params(kN, kN, kEps, prof);
    EXPECT_EQ(p.scale, "asymptotic");
    EXPECT_TRUE(p.ledger_holds()) << prof;
    EXPECT_GT(p.ledger.size(), 3u);
  }
}

TEST(Plan, SeededNmPicksTheSmallestSeed) {
  auto p = plan_params(kN, kN, kEps, "seeded-nm");
  std::int64_t d = p.at("d");
  EXPECT_EQ(p.at("out"), std::int64_t(kN / 4));
  EXPECT_EQ(p.at("adv_out"), d / 10);
  EXPECT_EQ(p.at("m1"), p.at("s") / 5);
  // One bit less and some seed-side line breaks.
  std::map<std::string, std::int64_t> sym;
  auto lower = detail::seeded_nm_ledger(double(kN), double(kN), double(d - 1), to_double(kEps) / 10, {}, sym);
  EXPECT_NE(first_failure(lower), nullptr);
  // eps' = eps/10 feeds d1 = C log(n/eps').
  EXPECT_EQ(p.at("d1"), iceil(2 * std::log2(double(kN) / (to_double(kEps) / 10))));
}

TEST(Plan, TwoSourceSlices) {
  auto p = plan_params(kN, kN, kEps, "two-source-nm");
  EXPECT_EQ(p.at("n1") + p.at("n3") + p.at("n4") + p.at("n5"), std::int64_t(kN));
  std::int64_t w = p.at("w");
  EXPECT_EQ(w, 30);
  EXPECT_EQ(p.at("n3") % w, 0);
  EXPECT_EQ(p.at("n4") % w, 0);
  EXPECT_EQ(p.at("n5") % w, 0);
  EXPECT_NEAR(double(p.at("n3")), double(kN) / 71, double(w));
  EXPECT_NEAR(double(p.at("n4")), 30.0 * double(kN) / 71, double(w));
  EXPECT_LE(p.at("r"), std::int64_t(double(kN) / 3600 / 2));
}

TEST(Plan, InfeasibleInputsNameTheInequality) {
  EXPECT_EQ(infeasible_line([] { plan_params(1 << 20, 1 << 20, kEps, "two-source-nm"); }), "d >= 240(l+1)s");
  EXPECT_EQ(infeasible_line([] { plan_params(1 << 10, 1 << 10, kEps, "two-source-nm"); }), "r >= log n");
  EXPECT_EQ(infeasible_line([] { plan_params(1 << 20, 1 << 20, kEps, "seeded-nm"); }), "k >= 6d");
  EXPECT_EQ(infeasible_line([] { plan_params(kN, kN / 2, kEps, "two-source-nm"); }), "k >= (1-gamma)n");
  PlanConstants bad;
  bad.alpha = 1.0 / 150;
  EXPECT_EQ(infeasible_line([&] { plan_params(kN, kN, kEps, "two-source-nm", bad); }), "alpha < beta/50");
  EXPECT_THROW(plan_params(100, 100, kEps, "bogus"), ParseError);
}

TEST(Plan, EntropyFunctionKnob) {
  auto mild = [](double e) { return std::log2(1 / e); };
  auto base = plan_params(kN, kN, kEps, "multi", {}, mild);
  EXPECT_TRUE(base.ledger_holds());
  EXPECT_EQ(base.ledger[4].text, "k >= C t^2 (log n + f(eps))");
  EXPECT_DOUBLE_EQ(base.ledger[4].rhs, 2 * (30 + 20));
  // A steeper f(eps) raises the entropy line past k.
  auto steep = [](double e) { return 1e12 * std::log2(1 / e); };
  EXPECT_EQ(infeasible_line([&] { plan_params(kN, kN, kEps, "multi", {}, steep); }), "k >= C t^2 (log n + f(eps))");
}

TEST(Plan, Deterministic) {
  for (auto prof : {"seeded-nm", "two-source-nm", "multi"}) {
    EXPECT_EQ(canonical(plan_params(kN, kN, kEps, prof)), canonical(plan_params(kN, kN, kEps, prof)));
    EXPECT_EQ(canonical(toy_plan(prof)), canonical(toy_plan(prof)));
  }
}

TEST(Plan, JsonRoundTrip) {
  for (auto prof : {"seeded-nm", "two-source-nm", "multi"}) {
    for (auto p : {plan_params(kN, kN, kEps, prof), toy_plan(prof)}) {
      auto q = plan_from_json(nlohmann::json::parse(to_json(p).dump()));
      EXPECT_EQ(canonical(q), canonical(p));
      EXPECT_EQ(plan_hash(q), plan_hash(p));
    }
  }
  EXPECT_THROW(plan_from_json(nlohmann::json::parse("{\"profile\":1}")), ParseError);
}

TEST(Plan, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
}

TEST(Plan, RationalParsing) {
  EXPECT_EQ(parse_rational("1/1024"), pow2(-10));
  EXPECT_EQ(parse_rational("2^-20"), pow2(-20));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational("0.25x"), ParseError);
}

TEST(Plan, SmallestToyTwoSourcePlan) {
  auto c = smallest_nm2();
  EXPECT_EQ(c.n, 152u);
  // w = 7 would need n1 + n3 + n4 + n5 = 14 + 105 + 14 + 14 = 147 > 128.
  EXPECT_THROW(Nm2Cfg::make(147, 14, 7, 105, 14, 14), PlanViolation);
  auto p = toy_plan("two-source-nm");
  EXPECT_EQ(p.scale, "toy");
  EXPECT_FALSE(p.ledger_holds());
  auto n = nm2_from_plan(p);
  EXPECT_EQ(n.out(), 3u);
  EXPECT_EQ(snm_from_plan(toy_plan("seeded-nm")).out(), 4u);
  EXPECT_EQ(tnm_from_plan(toy_plan("multi")).first.out(), 3u);
  EXPECT_THROW(nm2_from_plan(plan_params(kN, kN, kEps, "two-source-nm")), PlanViolation);
}
