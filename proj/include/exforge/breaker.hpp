#pragma once

// Flip-flop and the correlation breaker with advice (AdvCB).

#include <bit>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "exforge/laext.hpp"
#include "exforge/twosource.hpp"

namespace exforge {

// One planner inequality with both sides evaluated.
struct Inequality {
  std::string text;
  double lhs = 0, rhs = 0;
  bool strict = false;
  bool holds() const { return strict ? lhs > rhs : lhs >= rhs; }
};

inline const Inequality* first_failure(const std::vector<Inequality>& v) {
  for (auto& i : v)
    if (!i.holds()) return &i;
  return nullptr;
}

// ---------------------------------------------------------------- flip-flop

struct FlipFlopCfg {
  std::size_t n = 0, d = 0, k = 0;
  std::size_t out = 0;  // floor(0.4 k); also the internal message width
  std::size_t y1 = 0;   // first half of y
  AltExtCfg phase1, phase2;
  SeededExtCfg ext_y2, ext_out;

  static FlipFlopCfg make(std::size_t n, std::size_t d, std::size_t k) {
    FlipFlopCfg c;
    c.n = n;
    c.d = d;
    c.k = k;
    c.out = 2 * k / 5;
    c.y1 = d / 2;
    if (c.out < 1) throw PlanViolation("flip-flop output floor(0.4k) is empty for k = " + std::to_string(k));
    if (c.y1 < c.out)
      throw PlanViolation("flip-flop seed half of " + std::to_string(c.y1) + " bits is shorter than a " +
                          std::to_string(c.out) + "-bit message");
    std::size_t s = c.out;
    c.phase1 = AltExtCfg::make(2, s, n, c.y1);
    c.phase2 = AltExtCfg::make(2, s, n, s);
    c.ext_y2 = SeededExtCfg::lhl(d - c.y1, s, s, d - c.y1);
    c.ext_out = SeededExtCfg::lhl(n, s, s, k);
    return c;
  }
};

// Phase 1 favours bit b, phase 2 favours 1-b.
inline BitString flip_flop(const FlipFlopCfg& c, const BitString& x, const BitString& y, bool b) {
  if (x.size() != c.n || y.size() != c.d)
    throw LengthMismatch("flip-flop inputs of " + std::to_string(x.size()) + " and " + std::to_string(y.size()) + " bits");
  std::size_t s = c.out;
  BitString y1 = y.slice(0, c.y1), y2 = y.slice(c.y1, c.d - c.y1);
  auto r = la_ext(c.phase1, x, y1, y1.slice(0, s));
  BitString yy = lhl_extract(c.ext_y2, y2, r[b ? 1 : 0]);
  auto r2 = la_ext(c.phase2, x, yy, yy);
  return lhl_extract(c.ext_out, x, r2[b ? 0 : 1]);
}

// ---------------------------------------------------------------------- AdvCB

struct AdvCBCfg {
  std::size_t d = 0;
  std::size_t a = 0;      // advice length as supplied
  std::size_t a_pad = 0;  // next power of two
  std::size_t ell = 0;    // log2(a_pad)
  std::size_t s = 0;      // matrix row width
  std::size_t u = 0;      // alternating-extraction message width (3s)
  std::size_t r = 0;      // merger output width floor(0.2 s)
  std::size_t slice = 0;  // floor(0.3 d)
  std::size_t out = 0;    // floor(d/10)

  IPCfg ip;
  AltExtCfg alt_y, alt_x;
  FlipFlopCfg ff;
  NipmCfg merge;
  SeededExtCfg ext_r;      // Ext(R_2j, V̄) -> r bits
  SeededExtCfg ext_s;      // Ext'(S_j, Ṽ) -> s bits
  SeededExtCfg ext_final;  // Ext_w(Y, V^l) -> u bits
  SeededExtCfg ext_out;    // Ext''(X, .) -> d/10 bits

  bool ignore_advice = false;  // broken control for tests: every advice bit read as 0

  // Runnable configuration. s defaults to the widest row that fits the
  // 0.3d slice; r = floor(0.2 s) must be a real seed.
  static AdvCBCfg toy(std::size_t d, std::size_t a, std::size_t s = 0) {
    AdvCBCfg c;
    c.d = d;
    c.a = a;
    if (a < 1) throw PlanViolation("advice must have at least one bit");
    c.a_pad = std::bit_ceil(a);
    c.ell = std::size_t(std::countr_zero(c.a_pad));
    c.slice = 3 * d / 10;
    c.out = d / 10;
    c.s = s ? s : c.slice / 3;
    c.u = 3 * c.s;
    c.r = c.s / 5;
    if (c.out < 1) throw PlanViolation("output floor(d/10) is empty for d = " + std::to_string(d));
    if (c.r < 1)
      throw PlanViolation("floor(0.2 s) >= 1 fails: merger output would be an empty seed (s = " + std::to_string(c.s) + ")");
    if (c.slice < c.u)
      throw PlanViolation("0.3d slice of " + std::to_string(c.slice) + " bits cannot carry 3s = " + std::to_string(c.u));
    c.ip = IPCfg::make(c.slice, c.u);
    c.alt_y = AltExtCfg::make(2 * c.ell + 1, c.u, d, c.u);
    c.alt_x = AltExtCfg::make(c.ell + 1, c.u, d, c.u);
    c.ff = FlipFlopCfg::make(c.u, c.u, (5 * c.s + 1) / 2);
    if (c.ff.out != c.s) throw PlanViolation("flip-flop width differs from row width");
    c.merge = NipmCfg::make(2, c.s, c.u);
    c.ext_r = SeededExtCfg::lhl(c.u, c.r, c.r, c.u);
    c.ext_s = SeededExtCfg::lhl(c.u, c.r, c.s, c.u);
    c.ext_final = SeededExtCfg::lhl(d, c.s, c.u, d);
    c.ext_out = SeededExtCfg::lhl(d, c.u, c.out, d);
    return c;
  }

  // Entropy-budget lines from the analysis, evaluated for this configuration.
  std::vector<Inequality> budget_ledger() const {
    double D = double(d), S = double(s), L = double(ell);
    return {
        {"0.3d - (12l+9)s >= 4s", 0.3 * D - (12 * L + 9) * S, 4 * S},
        {"0.2d - (6l+6)s >= 0.15d", 0.2 * D - (6 * L + 6) * S, 0.15 * D},
        {"d >= 240(l+1)s", D, 240 * (L + 1) * S},
    };
  }
};

// Asymptotic parameter choice; arithmetic only, never instantiated.
struct AdvCBFullParams {
  double d = 0, a = 0, ell = 0, eps = 0, eps_prime = 0, c = 1, cprime = 16;
  double s = 0;
  std::vector<Inequality> ledger;

  static AdvCBFullParams make(double d, double a, double eps, double c = 1, double cprime = 16) {
    AdvCBFullParams p;
    p.d = d;
    p.a = std::exp2(std::ceil(std::log2(std::max(1.0, a))));
    p.ell = std::log2(p.a);
    p.eps = eps;
    p.c = c;
    p.cprime = cprime;
    p.eps_prime = eps / (cprime * p.a);
    // smallest integer s with s >= max{c log(d/eps'), 8c log(3s/eps')}
    double s = std::ceil(c * std::log2(d / p.eps_prime));
    while (s < 8 * c * std::log2(3 * s / p.eps_prime)) s += 1;
    p.s = s;
    double L = p.ell, lg = std::log2(1 / p.eps_prime);
    p.ledger = {
        {"s >= c log(d/eps')", s, c * std::log2(d / p.eps_prime)},
        {"s >= 8c log(3s/eps')", s, 8 * c * std::log2(3 * s / p.eps_prime)},
        {"d >= 240(l+1)s", d, 240 * (L + 1) * s},
        {"0.05d >= 4s + 2(2l+1)3s + 2log(1/eps')", 0.05 * d, 4 * s + 2 * (2 * L + 1) * 3 * s + 2 * lg},
        {"0.3d - (12l+9)s >= 4s", 0.3 * d - (12 * L + 9) * s, 4 * s},
        {"0.2d - (6l+6)s >= 0.15d", 0.2 * d - (6 * L + 6) * s, 0.15 * d},
    };
    return p;
  }
};

namespace detail {

inline void check_shape(const std::vector<BitString>& v, std::size_t rows, std::size_t width, std::size_t round) {
  if (v.size() != rows) throw PlanViolation("round " + std::to_string(round) + " matrix has " + std::to_string(v.size()) + " rows");
  for (auto& row : v)
    if (row.size() != width) throw PlanViolation("round " + std::to_string(round) + " row width " + std::to_string(row.size()));
}

}  // namespace detail

// The l merge rounds. Only the matrix, the R blocks and the S blocks come in:
// no other view of x or y is reachable from here.
inline BitString adv_cb_rounds(const AdvCBCfg& c, std::vector<BitString> v, const std::vector<BitString>& R,
                               const std::vector<BitString>& S) {
  detail::check_shape(v, c.a_pad, c.s, 0);
  for (std::size_t j = 1; j <= c.ell; ++j) {
    std::map<std::pair<BitString, BitString>, BitString> memo;  // merge is pure; rows repeat a lot
    std::vector<BitString> next(v.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      auto key = std::make_pair(v[2 * i], v[2 * i + 1]);
      auto it = memo.find(key);
      if (it == memo.end()) {
        BitString vbar = nipm(c.merge, {key.first, key.second}, R[2 * j - 1]);
        BitString vt = lhl_extract(c.ext_r, R[2 * j], vbar);
        it = memo.emplace(key, lhl_extract(c.ext_s, S[j], vt)).first;
      }
      next[i] = it->second;
    }
    v = std::move(next);
    detail::check_shape(v, c.a_pad >> j, c.s, j);
  }
  return v[0];
}

inline BitString adv_cb(const AdvCBCfg& c, const BitString& x, const BitString& y, const BitString& alpha) {
  if (x.size() != c.d || y.size() != c.d)
    throw LengthMismatch("AdvCB inputs of " + std::to_string(x.size()) + " and " + std::to_string(y.size()) +
                         " bits, cfg says " + std::to_string(c.d));
  if (alpha.size() != c.a)
    throw LengthMismatch("advice of " + std::to_string(alpha.size()) + " bits, cfg says " + std::to_string(c.a));
  BitString adv = c.ignore_advice ? BitString(c.a_pad) : alpha.resized(c.a_pad);

  BitString z = ip_extract(c.ip, x.slice(0, c.slice), y.slice(0, c.slice));
  auto R = la_ext(c.alt_y, y, z, z);  // R_0..R_2l
  auto S = la_ext(c.alt_x, x, z, z);  // S_0..S_l

  BitString ff[2];
  bool have[2] = {false, false};
  std::vector<BitString> v(c.a_pad);
  for (std::size_t i = 0; i < c.a_pad; ++i) {
    int b = adv.get(i);
    if (!have[b]) {
      ff[b] = flip_flop(c.ff, S[0], R[0], b);
      have[b] = true;
    }
    v[i] = ff[b];
  }
  BitString last = adv_cb_rounds(c, std::move(v), R, S);
  return lhl_extract(c.ext_out, x, lhl_extract(c.ext_final, y, last));
}

}  // namespace exforge
