#pragma once

// Multi-source correlation breaker built on a pluggable s-source
// non-malleable extractor, and the seeded extractor that tolerates t
// tampered seeds with s independent sources.

#include <functional>
#include <string>
#include <vector>

#include "exforge/nm2ext.hpp"
#include "exforge/snmext.hpp"

namespace exforge {

struct SSourceNmExt {
  std::size_t s = 0;  // arity
  std::size_t n = 0;  // bits per source
  std::size_t m = 0;  // output bits
  double rate = 0;    // min-entropy rate each source must have
  std::string error;  // how the error is known
  std::function<BitString(const std::vector<BitString>&)> fn;

  BitString operator()(const std::vector<BitString>& xs) const {
    if (xs.size() != s) throw LengthMismatch("plug-in takes " + std::to_string(s) + " sources, got " + std::to_string(xs.size()));
    for (auto& x : xs)
      if (x.size() != n) throw LengthMismatch("plug-in source of " + std::to_string(x.size()) + " bits, expects " + std::to_string(n));
    return fn(xs);
  }
};

inline SSourceNmExt nm2_plugin(const Nm2Cfg& c) {
  return {2, c.n, c.out(), 1.0, "empirical at toy scale (nm2 regression suite)",
          [c](const std::vector<BitString>& xs) { return nm2_extract(c, xs[0], xs[1]); }};
}

// Plain inner product: right shape, not non-malleable. For interface tests.
inline SSourceNmExt ip_plugin(std::size_t n, std::size_t m) {
  auto ip = IPCfg::make(n, m);
  return {2, n, m, 1.0, "none (not non-malleable)", [ip](const std::vector<BitString>& xs) { return ip_extract(ip, xs[0], xs[1]); }};
}

// Slot for a ten-source extractor; not shipped.
inline SSourceNmExt ten_source_stub(std::size_t n, std::size_t m) {
  return {10, n, m, 0.0, "not implemented", [](const std::vector<BitString>&) -> BitString {
            throw NotImplemented("no ten-source non-malleable extractor is shipped; plug one in");
          }};
}

struct MultiCfg {
  std::size_t s = 0, t = 0, a = 0;
  std::size_t n = 0;     // bits per source
  std::size_t vlen = 0;  // a / gamma: the slice fed to the plug-in with the advice
  std::size_t m = 0;     // plug-in output
  SeededExtCfg refresh;  // Ext(X_i, R) -> vlen bits
  bool ignore_advice = false;  // broken control: advice read as zeros

  double gamma() const { return double(a) / double(vlen); }

  static MultiCfg make(std::size_t s, std::size_t t, std::size_t a, std::size_t n, const SSourceNmExt& plug) {
    MultiCfg c;
    c.s = s;
    c.t = t;
    c.a = a;
    c.n = n;
    if (t < 1) throw PlanViolation("need at least one tampering");
    if (plug.s != s) throw PlanViolation("plug-in arity " + std::to_string(plug.s) + " differs from s = " + std::to_string(s));
    if (plug.n <= a) throw PlanViolation("plug-in input of " + std::to_string(plug.n) + " bits leaves no room beside the advice");
    c.vlen = plug.n - a;
    c.m = plug.m;
    if (c.vlen > n) throw PlanViolation("slice a/gamma = " + std::to_string(c.vlen) + " exceeds the source length " + std::to_string(n));
    if (t > 1) c.refresh = SeededExtCfg::lhl(n, c.m, c.vlen, n);
    return c;
  }

  std::vector<Inequality> ledger() const {
    double ag = double(vlen);  // a/gamma
    return {{"n >= 2(t+1)^2 a/gamma", double(n), 2.0 * double((t + 1) * (t + 1)) * ag}};
  }
};

// consumed[l-1] is the per-source ledger after iteration l: every iteration
// exposes the slice of X_i and of its t tampered copies.
inline BitString multi_adv_cb(const MultiCfg& c, const SSourceNmExt& ext, const std::vector<BitString>& xs,
                              const BitString& alpha, std::vector<std::size_t>* consumed = nullptr) {
  if (xs.size() != c.s) throw PlanViolation("expected " + std::to_string(c.s) + " sources, got " + std::to_string(xs.size()));
  for (auto& x : xs)
    if (x.size() != c.n) throw LengthMismatch("source of " + std::to_string(x.size()) + " bits, cfg says " + std::to_string(c.n));
  if (alpha.size() != c.a) throw LengthMismatch("advice of " + std::to_string(alpha.size()) + " bits, cfg says " + std::to_string(c.a));
  std::vector<BitString> v;
  for (auto& x : xs) v.push_back(x.slice(0, c.vlen));
  std::size_t used = 0;
  BitString r;
  for (std::size_t l = 1; l <= c.t; ++l) {
    std::vector<BitString> tv;
    for (auto& vi : v) tv.push_back(vi.concat(c.ignore_advice ? BitString(c.a) : alpha));
    r = ext(tv);
    used += (c.t + 1) * c.vlen;
    if (used > l * (c.t + 1) * c.vlen) throw PlanViolation("consumed-bits ledger exceeded at iteration " + std::to_string(l));
    if (consumed) consumed->push_back(used);
    if (l == c.t) break;  // the last refresh is never read
    for (std::size_t i = 0; i < c.s; ++i) v[i] = lhl_extract(c.refresh, xs[i], r);
  }
  return r;
}

// ------------------------------------------------- seeded t-non-malleable

struct TnmCfg {
  std::size_t s = 0, t = 0, n = 0, k = 0, d = 0;
  AdvGenCfg gen;           // Y_1, Z-bar_1 and Y_2 for source 1; gen.ext_z is Ext'
  std::size_t d4 = 0;      // max(d2, d1 + d3)
  std::size_t d5 = 0;      // 3(t+1) d4, both IP slices
  std::size_t m1 = 0;      // 0.5 d
  IPCfg ip;                // R = IP(Y_3, Z_3), d4 bits
  SeededExtCfg ext1, ext2; // Y~ = Ext_1(Y, R), Z~_1 = Ext_2(Z_1, R)
  MultiCfg multi;          // over (Y~, Z~_1, ..., Z~_s)

  std::size_t out() const { return multi.m; }

  static TnmCfg make(std::size_t s, std::size_t t, std::size_t n, std::size_t k, std::size_t d, std::size_t d1,
                     std::size_t count, const SSourceNmExt& plug) {
    TnmCfg c;
    c.s = s;
    c.t = t;
    c.n = n;
    c.k = k;
    c.d = d;
    if (s < 1) throw PlanViolation("need at least one source");
    c.gen = AdvGenCfg::make(n, k, d, d1, count);
    c.d4 = std::max(c.gen.d2, c.gen.d1 + c.gen.d3);
    c.d5 = 3 * (t + 1) * c.d4;
    if (d1 + c.d5 > d) throw PlanViolation("Y_1 and Y_3 need " + std::to_string(d1 + c.d5) + " of " + std::to_string(d) + " seed bits");
    if (c.gen.d2 + c.d5 > d) throw PlanViolation("Z-bar_1 and Z_3 overlap inside a " + std::to_string(d) + "-bit Z_1");
    c.m1 = d / 2;
    c.ip = IPCfg::make(c.d5, c.d4);
    c.ext1 = SeededExtCfg::lhl(d, c.d4, c.m1, d);
    c.ext2 = SeededExtCfg::lhl(d, c.d4, c.m1, d);
    c.multi = MultiCfg::make(s + 1, t, c.gen.a(), c.m1, plug);
    return c;
  }

  std::vector<Inequality> ledger(double eps, double C = 2) const {
    double lg = C * double(t * t) * std::log2(double(n) / eps);
    std::vector<Inequality> v = {
        {"d5 = 3(t+1)d4", 0.0 - std::abs(double(d5) - double(3 * (t + 1) * d4)), 0},
        {"k >= C t^2 log(n/eps)", double(k), lg},
        {"d >= C t^2 log(n/eps)", double(d), lg},
    };
    for (auto& i : multi.ledger()) v.push_back(i);
    return v;
  }
};

inline BitString seeded_tnm_extract(const TnmCfg& c, const SSourceNmExt& ext, const std::vector<BitString>& xs,
                                    const BitString& y) {
  if (xs.size() != c.s) throw PlanViolation("expected " + std::to_string(c.s) + " sources, got " + std::to_string(xs.size()));
  if (y.size() != c.d) throw LengthMismatch("seed of " + std::to_string(y.size()) + " bits, cfg says " + std::to_string(c.d));
  BitString y1 = y.slice(0, c.gen.d1);
  std::vector<BitString> z;
  for (auto& x : xs) {
    if (x.size() != c.n) throw LengthMismatch("source of " + std::to_string(x.size()) + " bits, cfg says " + std::to_string(c.n));
    z.push_back(lhl_extract(c.gen.ext_z, x, y1));
  }
  BitString alpha = y1.concat(advice_g(c.gen, y, z[0].slice(0, c.gen.d2)));
  BitString r = ip_extract(c.ip, y.slice(c.gen.d1, c.d5), z[0].slice(c.d - c.d5, c.d5));
  std::vector<BitString> in{lhl_extract(c.ext1, y, r), lhl_extract(c.ext2, z[0], r)};
  for (std::size_t i = 1; i < c.s; ++i) in.push_back(z[i].slice(0, c.m1));
  return multi_adv_cb(c.multi, ext, in, alpha);
}

}  // namespace exforge
