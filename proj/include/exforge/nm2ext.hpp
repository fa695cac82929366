#pragma once

// Non-malleable two-source extractor: IP-driven sampling of Reed-Solomon
// encodings for advice, AdvCB on the third slices, IExt on the fourth.

#include <cmath>
#include <string>
#include <vector>

#include "exforge/breaker.hpp"
#include "exforge/iext.hpp"
#include "exforge/rs.hpp"

namespace exforge {

struct Nm2Cfg {
  std::size_t n = 0;
  unsigned w = 0;  // symbol width, ceil(log2 n)
  std::size_t n1 = 0, n3 = 0, n4 = 0, n5 = 0;
  std::size_t r = 0;      // IP output bits
  std::size_t count = 0;  // r / w sampled symbols
  IPCfg ip;
  RSCode rs;  // (n - n1)/w message symbols, n codeword symbols
  AdvCBCfg adv;
  IExtCfg iext;

  std::size_t out() const { return iext.out; }
  std::size_t a() const { return 2 * n1 + 2 * count * w; }
  std::size_t t4() const { return n4 / w; }
  std::size_t t5() const { return n5 / w; }

  static Nm2Cfg make(std::size_t n, std::size_t n1, std::size_t r, std::size_t n3, std::size_t n4, std::size_t n5) {
    Nm2Cfg c;
    c.n = n;
    c.w = unsigned(std::bit_width(n - 1));
    c.n1 = n1;
    c.r = r;
    c.n3 = n3;
    c.n4 = n4;
    c.n5 = n5;
    if (n1 + n3 + n4 + n5 != n)
      throw PlanViolation("slices " + std::to_string(n1) + "+" + std::to_string(n3) + "+" + std::to_string(n4) + "+" +
                          std::to_string(n5) + " do not partition n = " + std::to_string(n));
    for (auto len : {n3, n4, n5})
      if (len % c.w) throw PlanViolation("slice of " + std::to_string(len) + " bits is not whole " + std::to_string(c.w) + "-bit symbols");
    if (r < c.w || r % c.w) throw PlanViolation("r must be a positive multiple of the symbol width");
    if (2 * r > n1) throw PlanViolation("r <= n1/2 fails");
    c.count = r / c.w;
    if (c.count >= c.t5()) throw PlanViolation("t5 = n5/log n > r/log n fails: the Y_5 system would be overdetermined");
    c.ip = IPCfg::make(n1, r);
    c.rs = RSCode(c.w, (n - n1) / c.w, n);
    c.adv = AdvCBCfg::toy(n3, c.a());
    c.iext = IExtCfg::make(n4, c.adv.out);
    if (2 * c.iext.out >= c.adv.out) throw PlanViolation("IExt output must stay below d/2");
    return c;
  }
};

// The slices of one side, written out so the bookkeeping is checkable.
struct Nm2Slices {
  BitString s1, s3, s4, s5;
  BitString s2() const { return concat(s3, s4, s5); }
};

inline Nm2Slices nm2_slices(const Nm2Cfg& c, const BitString& v) {
  Nm2Slices s{v.slice(0, c.n1), v.slice(c.n1, c.n3), v.slice(c.n1 + c.n3, c.n4), v.slice(c.n1 + c.n3 + c.n4, c.n5)};
  if (concat(s.s1, s.s2()) != v) throw PlanViolation("slices do not reassemble the input");
  return s;
}

// RS message of the second slice written backwards: coefficient j is the
// j-th w-bit chunk of reverse(X_2).
inline std::vector<Sym> nm2_message(const Nm2Cfg& c, const BitString& x2) { return to_symbols(x2.reversed(), c.w); }

inline std::vector<std::size_t> nm2_positions(const Nm2Cfg& c, const BitString& z) {
  return sample_positions(z, c.w, c.rs.n, c.count);
}

// Everything the final step sees, for the encoder and for tests.
struct Nm2Trace {
  BitString z, alpha, v, w;
  std::vector<std::size_t> positions;
};

inline Nm2Trace nm2_trace(const Nm2Cfg& c, const BitString& x, const BitString& y) {
  if (x.size() != c.n || y.size() != c.n)
    throw LengthMismatch("two-source inputs of " + std::to_string(x.size()) + " and " + std::to_string(y.size()) +
                         " bits, cfg says " + std::to_string(c.n));
  auto xs = nm2_slices(c, x), ys = nm2_slices(c, y);
  Nm2Trace t;
  t.z = ip_extract(c.ip, xs.s1, ys.s1);
  t.positions = nm2_positions(c, t.z);
  auto mx = nm2_message(c, xs.s2()), my = nm2_message(c, ys.s2());
  BitString xt, yt;
  for (auto p : t.positions) {
    xt = xt.concat(BitString::from_uint(c.rs.at(mx, p), c.w));
    yt = yt.concat(BitString::from_uint(c.rs.at(my, p), c.w));
  }
  t.alpha = concat(xs.s1, ys.s1, xt, yt);
  t.v = adv_cb(c.adv, xs.s3, ys.s3, t.alpha);
  t.w = iext_extract(c.iext, ys.s4, t.v);
  return t;
}

inline BitString nm2_extract(const Nm2Cfg& c, const BitString& x, const BitString& y) { return nm2_trace(c, x, y).w; }

}  // namespace exforge
