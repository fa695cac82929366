#pragma once

// Parameter planner: solves the inequality ledger of each construction into
// concrete lengths, and builds the runnable toy plans.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "exforge/multi.hpp"
#include "exforge/nmcode.hpp"
#include "exforge/snmext.hpp"

namespace exforge {

struct PlanConstants {
  double c = 1, C = 2, cprime = 16;
  // two-source slicing: 0 < gamma < alpha < beta < 1/70, alpha < beta/50
  double alpha = 1.0 / 3600, beta = 1.0 / 71, gamma = 1.0 / 10800;
  std::size_t t = 1;  // tamperings (multi)
  std::size_t s = 2;  // sources (multi)
};

struct ParamPlan {
  std::string profile;  // seeded-nm | two-source-nm | multi
  std::string scale;    // "asymptotic": ledger enforced; "toy": runnable, ledger reported
  std::size_t n = 0, k = 0;
  Rational eps{1, 4};
  PlanConstants consts;
  std::map<std::string, std::int64_t> sym;
  std::vector<Inequality> ledger;

  std::int64_t at(const std::string& key) const {
    auto it = sym.find(key);
    if (it == sym.end()) throw ParseError("plan has no symbol '" + key + "'");
    return it->second;
  }
  std::size_t z(const std::string& key) const { return std::size_t(at(key)); }
  bool ledger_holds() const { return first_failure(ledger) == nullptr; }
};

// ----------------------------------------------------------------- helpers

inline Rational parse_rational(const std::string& s) {
  try {
    if (s.rfind("2^", 0) == 0) return pow2(std::stol(s.substr(2)));
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      Rational r(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
      return r;
    }
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("trailing characters in '" + s + "'");
    return Rational(v);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("not a rational: '" + s + "'");
  }
}

inline double lg(double v) { return std::log2(v); }
inline std::int64_t iceil(double v) { return std::int64_t(std::ceil(v - 1e-9)); }

// Smallest d in [lo, 2^40] with ok(d), assuming ok is monotone in d; the
// result is re-validated by the caller.
inline std::optional<std::int64_t> smallest(std::int64_t lo, const std::function<bool(std::int64_t)>& ok) {
  std::int64_t hi = std::max<std::int64_t>(lo, 1);
  while (!ok(hi)) {
    if (hi > (std::int64_t(1) << 40)) return std::nullopt;
    hi *= 2;
  }
  std::int64_t a = lo;
  while (a < hi) {
    std::int64_t mid = a + (hi - a) / 2;
    if (ok(mid)) hi = mid;
    else a = mid + 1;
  }
  return hi;
}

inline void require(const std::vector<Inequality>& v) {
  if (auto f = first_failure(v))
    throw Infeasible(f->text, "lhs " + std::to_string(f->lhs) + " < rhs " + std::to_string(f->rhs));
}

// -------------------------------------------------------- asymptotic plans

namespace detail {

inline std::vector<Inequality> seeded_nm_ledger(double n, double k, double d, double ep, const PlanConstants& K,
                                                std::map<std::string, std::int64_t>& sym) {
  double d1 = iceil(K.C * lg(n / ep)), d2 = d1, d3 = iceil(K.C * lg(1 / ep));
  double a = d1 + d3;
  auto adv = AdvCBFullParams::make(d, a, ep, K.c, K.cprime);
  double s = adv.s, L = 2;
  sym = {{"d", std::int64_t(d)}, {"d1", std::int64_t(d1)}, {"d2", std::int64_t(d2)}, {"d3", std::int64_t(d3)},
         {"a", std::int64_t(a)}, {"a_pad", std::int64_t(adv.a)}, {"l", std::int64_t(adv.ell)}, {"s", std::int64_t(s)},
         {"u", std::int64_t(3 * s)}, {"r", std::int64_t(std::floor(0.2 * s))}, {"L", 2},
         {"m1", std::int64_t(std::floor(0.2 * s))}, {"ff_out", std::int64_t(std::floor(0.4 * std::ceil(2.5 * s)))},
         {"adv_out", std::int64_t(std::floor(d / 10))}, {"out", std::int64_t(std::floor(k / 4))}};
  std::vector<Inequality> v = adv.ledger;
  v.push_back({"m >= 4cL log(d/eps)", s, 4 * K.c * L * lg(3 * s / adv.eps_prime)});
  v.push_back({"d' >= 4cL log(m/eps)", 3 * s, 4 * K.c * L * lg(s / adv.eps_prime)});
  v.push_back({"d >= C log(n/eps')", d, K.C * lg(n / ep)});
  v.push_back({"d >= d1 + d2", d, d1 + d2});
  v.push_back({"n >= k", n, k});
  v.push_back({"k >= 6d", k, 6 * d});
  v.push_back({"out = floor(k/4) >= 1", std::floor(k / 4), 1});
  return v;
}

}  // namespace detail

// Smallest d satisfying every seed-side line, then the entropy lines.
inline ParamPlan plan_seeded_nm(std::size_t n, std::size_t k, const Rational& eps, const PlanConstants& K = {}) {
  ParamPlan p{"seeded-nm", "asymptotic", n, k, eps, K, {}, {}};
  double ep = to_double(eps) / 10;
  if (!(ep > 0)) throw Infeasible("eps > 0", "");
  auto seed_ok = [&](std::int64_t d) {
    std::map<std::string, std::int64_t> sym;
    for (auto& i : detail::seeded_nm_ledger(double(n), double(k), double(d), ep, K, sym))
      if (i.text != "k >= 6d" && i.text != "n >= k" && i.text != "out = floor(k/4) >= 1" && !i.holds()) return false;
    return true;
  };
  auto d = smallest(1, seed_ok);
  if (!d) throw Infeasible("d >= 240(l+1)s", "no seed length up to 2^40");
  p.ledger = detail::seeded_nm_ledger(double(n), double(k), double(*d), ep, K, p.sym);
  p.sym["n"] = std::int64_t(n);
  p.sym["k"] = std::int64_t(k);
  require(p.ledger);
  return p;
}

inline std::vector<Inequality> two_source_ledger(std::size_t n, const PlanConstants& K, const Rational& eps,
                                                 std::map<std::string, std::int64_t>& sym) {
  double N = double(n);
  std::int64_t w = std::int64_t(std::bit_width(n - 1));
  auto down = [&](double v) { return w * std::int64_t(std::floor(v / double(w))); };
  std::int64_t n3 = down(K.beta * N), n4 = down(30 * K.beta * N), n1 = std::int64_t(std::floor(K.alpha * N));
  std::int64_t n5 = std::int64_t(n) - n1 - n3 - n4;
  n1 += n5 % w;  // keep every RS-encoded slice whole symbols
  n5 -= n5 % w;
  std::int64_t r = down(K.alpha * N / 2), count = r / std::max<std::int64_t>(w, 1);
  std::int64_t a = 2 * n1 + 2 * r;
  auto adv = AdvCBFullParams::make(double(n3), double(a), to_double(eps), K.c, K.cprime);
  std::int64_t d = n3 / 10, t = 9 * d / 10 + 1, out = 3 * d / 10;
  sym = {{"n", std::int64_t(n)}, {"w", w}, {"n1", n1}, {"n3", n3}, {"n4", n4}, {"n5", n5}, {"r", r},
         {"count", count}, {"a", a}, {"s", std::int64_t(adv.s)}, {"l", std::int64_t(adv.ell)}, {"d_iext", d},
         {"t_iext", t}, {"r1_iext", d / 10}, {"out", out}, {"t5", n5 / w}};
  std::vector<Inequality> v = {
      {"beta < 1/70", 1.0 / 70, K.beta, true},
      {"alpha < beta/50", K.beta / 50, K.alpha, true},
      {"gamma < alpha", K.alpha, K.gamma, true},
      {"n1+n3+n4+n5 = n", 0.0 - std::abs(double(n1 + n3 + n4 + n5) - N), 0},
      {"r >= log n", double(r), double(w)},
      {"r <= alpha n/2", K.alpha * N / 2, double(r)},
  };
  for (auto& i : adv.ledger) v.push_back(i);
  v.push_back({"0.9d+1 <= n4", double(n4), double(t)});
  v.push_back({"r1 <= 0.1d", 0.1 * double(d), double(d / 10)});
  v.push_back({"r1 >= 1", double(d / 10), 1});
  v.push_back({"t5 > r/log n", double(n5 / w), double(count), true});
  v.push_back({"out < d/2", double(d) / 2, double(out), true});
  return v;
}

inline ParamPlan plan_two_source_nm(std::size_t n, std::size_t k, const Rational& eps, const PlanConstants& K = {}) {
  ParamPlan p{"two-source-nm", "asymptotic", n, k, eps, K, {}, {}};
  if (n < 2) throw Infeasible("n >= 2", "");
  p.ledger = two_source_ledger(n, K, eps, p.sym);
  p.ledger.push_back({"n >= k", double(n), double(k)});
  p.ledger.push_back({"k >= (1-gamma)n", double(k), (1 - K.gamma) * double(n)});
  p.sym["k"] = std::int64_t(k);
  p.sym["rate_num"] = p.sym["out"];
  p.sym["rate_den"] = 2 * std::int64_t(n);
  require(p.ledger);
  return p;
}

// f_eps replaces log(1/eps) in the entropy line when given.
inline ParamPlan plan_multi(std::size_t n, std::size_t k, const Rational& eps, const PlanConstants& K = {},
                            const std::function<double(double)>& f_eps = nullptr) {
  ParamPlan p{"multi", "asymptotic", n, k, eps, K, {}, {}};
  double e = to_double(eps), T = double(K.t);
  if (!(e > 0)) throw Infeasible("eps > 0", "");
  double d1 = iceil(K.C * lg(double(n) / e)), d3 = iceil(K.C * lg(1 / e)), d2 = d1;
  double a = d1 + d3, d4 = std::max(d2, d1 + d3), d5 = 3 * (T + 1) * d4;
  double ag = a / K.gamma;
  auto lines = [&](double d) {
    double need = K.C * T * T * lg(double(n) / e);
    double kneed = f_eps ? K.C * T * T * (lg(double(n)) + f_eps(e)) : need;
    return std::vector<Inequality>{
        {"d5 = 3(t+1)d4", 0.0 - std::abs(d5 - 3 * (T + 1) * d4), 0},
        {"d >= C t^2 log(n/eps)", d, need},
        {"d >= d1 + d5", d, d1 + d5},
        {"m1 = 0.5d >= 2(t+1)^2 a/gamma", std::floor(d / 2), 2 * (T + 1) * (T + 1) * ag},
        {f_eps ? "k >= C t^2 (log n + f(eps))" : "k >= C t^2 log(n/eps)", double(k), kneed},
        {"k >= 0.5d", double(k), std::floor(d / 2)},
        {"n >= k", double(n), double(k)},
    };
  };
  auto d = smallest(1, [&](std::int64_t d) {
    for (auto& i : lines(double(d)))
      if (i.text.rfind("k >=", 0) != 0 && i.text != "n >= k" && !i.holds()) return false;
    return true;
  });
  if (!d) throw Infeasible("m1 = 0.5d >= 2(t+1)^2 a/gamma", "no seed length up to 2^40");
  p.ledger = lines(double(*d));
  p.sym = {{"n", std::int64_t(n)}, {"k", std::int64_t(k)}, {"d", *d}, {"d1", std::int64_t(d1)}, {"d2", std::int64_t(d2)},
           {"d3", std::int64_t(d3)}, {"d4", std::int64_t(d4)}, {"d5", std::int64_t(d5)}, {"a", std::int64_t(a)},
           {"m1", *d / 2}, {"t", std::int64_t(K.t)}, {"s", std::int64_t(K.s)}, {"vlen", std::int64_t(std::ceil(ag))}};
  require(p.ledger);
  return p;
}

inline ParamPlan plan_params(std::size_t n, std::size_t k, const Rational& eps, const std::string& profile,
                             const PlanConstants& K = {}, const std::function<double(double)>& f_eps = nullptr) {
  if (profile == "seeded-nm") return plan_seeded_nm(n, k, eps, K);
  if (profile == "two-source-nm") return plan_two_source_nm(n, k, eps, K);
  if (profile == "multi") return plan_multi(n, k, eps, K, f_eps);
  throw ParseError("unknown profile '" + profile + "' (seeded-nm, two-source-nm, multi)");
}

// -------------------------------------------------------------- toy plans

// Smallest n admitting an instantiable two-source plan: one sampled symbol,
// r = w, n1 = 2r, n5 = 2w, and the narrowest n3, n4 the toy AdvCB and IExt
// accept. n1 absorbs any padding needed to keep w = ceil(log2 n).
inline Nm2Cfg smallest_nm2() {
  std::optional<Nm2Cfg> best;
  for (std::size_t w = 2; w <= 16; ++w) {
    std::size_t r = w, n1 = 2 * r, n5 = 2 * w;
    for (std::size_t n3 = w; n3 <= 4096; n3 += w) {
      std::size_t d = n3 / 10;
      if (d < 10) continue;
      std::size_t t = 9 * d / 10 + 1, n4 = w * ((t + w - 1) / w);
      std::size_t n = n1 + n3 + n4 + n5;
      std::size_t lo = (std::size_t(1) << (w - 1)) + 1, hi = std::size_t(1) << w;
      if (n > hi) break;
      std::size_t pad = n < lo ? lo - n : 0;
      try {
        auto c = Nm2Cfg::make(n + pad, n1 + pad, r, n3, n4, n5);
        if (!best || c.n < best->n) best = c;
        break;
      } catch (const PlanViolation&) {
      }
    }
  }
  if (!best) throw Infeasible("instantiable toy plan", "no n up to 2^16");
  return *best;
}

inline ParamPlan toy_plan(const std::string& profile) {
  ParamPlan p;
  p.profile = profile;
  p.scale = "toy";
  if (profile == "seeded-nm") {
    auto c = SnmCfg::make(20, 16, 100, 8, 2);
    p.n = c.n;
    p.k = c.k;
    p.eps = c.eps;
    p.sym = {{"n", 20}, {"k", 16}, {"d", 100}, {"d1", 8}, {"count", 2}, {"d3", std::int64_t(c.gen.d3)},
             {"a", std::int64_t(c.gen.a())}, {"s", std::int64_t(c.adv.s)}, {"r", std::int64_t(c.adv.r)},
             {"l", std::int64_t(c.adv.ell)}, {"adv_out", std::int64_t(c.adv.out)}, {"out", std::int64_t(c.out())}};
    p.ledger = c.ledger();
    for (auto& i : c.adv.budget_ledger()) p.ledger.push_back(i);
  } else if (profile == "two-source-nm") {
    auto c = smallest_nm2();
    p.n = c.n;
    p.k = c.n;
    std::map<std::string, std::int64_t> asym;
    p.sym = {{"n", std::int64_t(c.n)}, {"w", c.w}, {"n1", std::int64_t(c.n1)}, {"n3", std::int64_t(c.n3)},
             {"n4", std::int64_t(c.n4)}, {"n5", std::int64_t(c.n5)}, {"r", std::int64_t(c.r)},
             {"count", std::int64_t(c.count)}, {"a", std::int64_t(c.a())}, {"s", std::int64_t(c.adv.s)},
             {"l", std::int64_t(c.adv.ell)}, {"d_iext", std::int64_t(c.adv.out)}, {"t_iext", std::int64_t(c.iext.t)},
             {"out", std::int64_t(c.out())}, {"rate_num", std::int64_t(c.out())}, {"rate_den", 2 * std::int64_t(c.n)}};
    p.ledger = {{"alpha < beta/50", double(c.n3) / 50, double(c.n1), true},
                {"0.9d+1 <= n4", double(c.n4), double(c.iext.t)},
                {"t5 > r/log n", double(c.t5()), double(c.count), true},
                {"out < d/2", double(c.adv.out) / 2, double(c.out()), true}};
    for (auto& i : c.adv.budget_ledger()) p.ledger.push_back(i);
  } else if (profile == "multi") {
    auto nm = smallest_nm2();
    auto c = TnmCfg::make(1, 1, 40, 32, 300, 8, 1, nm2_plugin(nm));
    p.n = 40;
    p.k = 32;
    p.consts.s = 1;
    p.consts.t = 1;
    p.sym = {{"n", 40}, {"k", 32}, {"d", 300}, {"d1", 8}, {"count", 1}, {"s", 1}, {"t", 1},
             {"d4", std::int64_t(c.d4)}, {"d5", std::int64_t(c.d5)}, {"m1", std::int64_t(c.m1)},
             {"a", std::int64_t(c.gen.a())}, {"vlen", std::int64_t(c.multi.vlen)}, {"out", std::int64_t(c.out())},
             {"plugin_n", std::int64_t(nm.n)}};
    p.ledger = c.ledger(to_double(p.eps));
  } else {
    throw ParseError("unknown profile '" + profile + "'");
  }
  return p;
}

// Runnable objects for toy plans.
inline Nm2Cfg nm2_from_plan(const ParamPlan& p) {
  if (p.profile != "two-source-nm" || p.scale != "toy") throw PlanViolation("codec needs a toy two-source-nm plan");
  return Nm2Cfg::make(p.z("n"), p.z("n1"), p.z("r"), p.z("n3"), p.z("n4"), p.z("n5"));
}

inline SnmCfg snm_from_plan(const ParamPlan& p) {
  if (p.profile != "seeded-nm" || p.scale != "toy") throw PlanViolation("needs a toy seeded-nm plan");
  return SnmCfg::make(p.z("n"), p.z("k"), p.z("d"), p.z("d1"), p.z("count"), p.z("d3"), p.eps);
}

inline std::pair<TnmCfg, SSourceNmExt> tnm_from_plan(const ParamPlan& p) {
  if (p.profile != "multi" || p.scale != "toy") throw PlanViolation("needs a toy multi plan");
  auto plug = nm2_plugin(smallest_nm2());
  if (plug.n != p.z("plugin_n")) throw PlanViolation("plug-in width differs from the plan");
  return {TnmCfg::make(p.z("s"), p.z("t"), p.z("n"), p.z("k"), p.z("d"), p.z("d1"), p.z("count"), plug), plug};
}

// ------------------------------------------------------------------- JSON

inline nlohmann::json to_json(const ParamPlan& p) {
  nlohmann::json j;
  j["profile"] = p.profile;
  j["scale"] = p.scale;
  j["n"] = p.n;
  j["k"] = p.k;
  j["eps"] = to_fraction(p.eps);
  j["constants"] = {{"c", p.consts.c},         {"C", p.consts.C},         {"cprime", p.consts.cprime},
                    {"alpha", p.consts.alpha}, {"beta", p.consts.beta},   {"gamma", p.consts.gamma},
                    {"t", p.consts.t},         {"s", p.consts.s}};
  j["symbols"] = p.sym;
  auto& led = j["ledger"] = nlohmann::json::array();
  for (auto& i : p.ledger)
    led.push_back({{"inequality", i.text}, {"lhs", i.lhs}, {"rhs", i.rhs}, {"strict", i.strict}, {"holds", i.holds()}});
  j["ledger_holds"] = p.ledger_holds();
  return j;
}

inline ParamPlan plan_from_json(const nlohmann::json& j) {
  try {
    ParamPlan p;
    p.profile = j.at("profile").get<std::string>();
    p.scale = j.at("scale").get<std::string>();
    p.n = j.at("n").get<std::size_t>();
    p.k = j.at("k").get<std::size_t>();
    p.eps = parse_rational(j.at("eps").get<std::string>());
    auto& c = j.at("constants");
    p.consts = {c.at("c").get<double>(),     c.at("C").get<double>(),    c.at("cprime").get<double>(),
                c.at("alpha").get<double>(), c.at("beta").get<double>(), c.at("gamma").get<double>(),
                c.at("t").get<std::size_t>(), c.at("s").get<std::size_t>()};
    p.sym = j.at("symbols").get<std::map<std::string, std::int64_t>>();
    for (auto& i : j.at("ledger"))
      p.ledger.push_back({i.at("inequality").get<std::string>(), i.at("lhs").get<double>(), i.at("rhs").get<double>(),
                          i.at("strict").get<bool>()});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed plan: ") + e.what());
  }
}

// Canonical form: sorted keys, no whitespace.
inline std::string canonical(const ParamPlan& p) { return to_json(p).dump(); }

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t plan_hash(const ParamPlan& p) { return fnv1a64(canonical(p)); }

}  // namespace exforge
