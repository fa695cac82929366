#pragma once

// Split-state non-malleable code: decode is the two-source extractor on the
// halves, encode samples uniformly from the decoding fiber.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "exforge/distrib.hpp"
#include "exforge/nm2ext.hpp"

namespace exforge {

struct Codeword {
  BitString left, right;
  bool operator==(const Codeword&) const = default;
};

struct CodecCfg {
  Nm2Cfg nm2;

  std::size_t n() const { return nm2.n; }
  std::size_t m() const { return nm2.out(); }
  double rate() const { return double(m()) / double(2 * n()); }
};

inline BitString decode(const CodecCfg& c, const Codeword& cw) {
  if (cw.left.size() != c.n() || cw.right.size() != c.n())
    throw LengthMismatch("codeword halves of " + std::to_string(cw.left.size()) + " and " + std::to_string(cw.right.size()) +
                         " bits, plan says " + std::to_string(c.n()));
  return nm2_extract(c.nm2, cw.left, cw.right);
}

namespace detail {

// Solve sum_{j < vars} c_j p_i^j = rhs_i for the low coefficients, uniformly.
inline std::vector<Sym> solve_low_coefficients(const Nm2Cfg& c, const std::vector<std::size_t>& pos,
                                               const std::vector<Sym>& rhs, std::size_t vars, Rng& rng) {
  std::vector<Sym> pts;
  for (auto p : pos) pts.push_back(Sym(p));
  Matrix g = vandermonde(c.rs.field, pts, vars - 1);
  if (rank(g) != pts.size()) throw PlanInfeasible("sampling constraints are not independent");
  return solve_affine_uniform(LinearSystem(g, rhs), rng).x;
}

// Second-slice bits whose reversed symbol string has the given low
// coefficients followed by the known reversed high part.
inline BitString second_slice_tail(const std::vector<Sym>& low, unsigned w) {
  return from_symbols(low, w).reversed();
}

}  // namespace detail

// Draw the conditioning variables uniformly, then fill the rest uniformly
// from the solution set of the decoding constraints. `v_out` receives the
// AdvCB output that seeded IExt.
inline Codeword encode(const CodecCfg& cc, const BitString& msg, Rng& rng, BitString* v_out = nullptr) {
  const Nm2Cfg& c = cc.nm2;
  if (msg.size() != cc.m()) throw LengthMismatch("message of " + std::to_string(msg.size()) + " bits, plan says " + std::to_string(cc.m()));
  BitString x1 = rng.bits(c.n1), x3 = rng.bits(c.n3), y1 = rng.bits(c.n1), y3 = rng.bits(c.n3);
  BitString xt = rng.bits(c.count * c.w), yt = rng.bits(c.count * c.w);

  BitString z = ip_extract(c.ip, x1, y1);
  auto pos = nm2_positions(c, z);
  BitString v = adv_cb(c.adv, x3, y3, concat(x1, y1, xt, yt));
  BitString y4 = iext_invert(c.iext, msg, v, rng);
  if (v_out) *v_out = v;

  std::size_t t4 = c.t4(), t5 = c.t5();
  auto xsym = to_symbols(xt, c.w), ysym = to_symbols(yt, c.w);

  // Y side: coefficients [0, t5) free, the rest come from rev(Y_4), rev(Y_3).
  auto ymsg = nm2_message(c, concat(y3, y4, BitString(c.n5)));
  std::vector<Sym> rhs;
  for (std::size_t i = 0; i < pos.size(); ++i) rhs.push_back(ysym[i] ^ c.rs.at(ymsg, pos[i]));
  BitString y5 = detail::second_slice_tail(detail::solve_low_coefficients(c, pos, rhs, t5, rng), c.w);

  // X side: coefficients [0, t5 + t4) free, the rest come from rev(X_3).
  auto xmsg = nm2_message(c, concat(x3, BitString(c.n4 + c.n5)));
  rhs.clear();
  for (std::size_t i = 0; i < pos.size(); ++i) rhs.push_back(xsym[i] ^ c.rs.at(xmsg, pos[i]));
  BitString x45 = detail::second_slice_tail(detail::solve_low_coefficients(c, pos, rhs, t5 + t4, rng), c.w);

  return {concat(x1, x3, x45), concat(y1, y3, y4, y5)};
}

// ---------------------------------------------------------------- file format

inline std::vector<std::uint8_t> write_codeword(const Codeword& cw, std::uint64_t plan_hash) {
  std::vector<std::uint8_t> out{'N', 'M', 'C', '1'};
  std::uint32_t n = std::uint32_t(cw.left.size());
  for (int i = 3; i >= 0; --i) out.push_back(std::uint8_t(n >> (8 * i)));
  for (int i = 7; i >= 0; --i) out.push_back(std::uint8_t(plan_hash >> (8 * i)));
  for (auto* half : {&cw.left, &cw.right}) {
    auto b = half->serialize();
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

struct CodewordFile {
  std::size_t n = 0;
  std::uint64_t plan_hash = 0;
  Codeword cw;
};

inline CodewordFile read_codeword(const std::vector<std::uint8_t>& in) {
  if (in.size() < 16 || in[0] != 'N' || in[1] != 'M' || in[2] != 'C' || in[3] != '1') throw FormatError("bad magic");
  CodewordFile f;
  for (int i = 0; i < 4; ++i) f.n = (f.n << 8) | in[4 + i];
  for (int i = 0; i < 8; ++i) f.plan_hash = (f.plan_hash << 8) | in[8 + i];
  std::size_t pos = 16;
  f.cw.left = BitString::deserialize(in, pos);
  f.cw.right = BitString::deserialize(in, pos);
  if (pos != in.size()) throw FormatError("trailing bytes after codeword");
  if (f.cw.left.size() != f.n || f.cw.right.size() != f.n) throw FormatError("half length differs from header");
  return f;
}

// ------------------------------------------------------------ tampering

struct TamperReport {
  std::vector<BitString> messages;
  std::vector<JointDist> outcomes;  // decoded outcome law per message
  double p_same = 0;                // fitted mass on "keep the message"
  std::map<BitString, double> q;    // fitted mass on each constant
  std::vector<double> sd;           // per message, to the fitted mixture
  double max_sd() const { return sd.empty() ? 0 : *std::max_element(sd.begin(), sd.end()); }
};

// One mixture G over {same} and constants, shared by every message:
// q_c = mean over messages s != c of Pr[decode = c | s], p_same = 1 - sum q_c
// (clamped, with q rescaled when the constants alone exceed 1). Because G is
// a valid mixture, each reported SD bounds the distance to the best one.
inline void fit_mixture(TamperReport& r) {
  std::size_t M = r.messages.size();
  r.q.clear();
  if (M == 0) return;
  std::map<BitString, double> sum;
  std::map<BitString, std::size_t> seen;
  for (std::size_t i = 0; i < M; ++i) {
    double tot = double(r.outcomes[i].total());
    r.outcomes[i].for_each([&](const BitString& o, std::uint64_t w) {
      if (o != r.messages[i]) sum[o] += double(w) / tot;
    });
  }
  double qs = 0;
  for (auto& [o, v] : sum) {
    std::size_t others = M;
    for (auto& s : r.messages) others -= (s == o);
    r.q[o] = others ? v / double(others) : 0.0;
    qs += r.q[o];
  }
  if (qs > 1) {
    for (auto& [o, v] : r.q) v /= qs;
    qs = 1;
  }
  r.p_same = 1 - qs;
  r.sd.assign(M, 0);
  for (std::size_t i = 0; i < M; ++i) {
    double tot = double(r.outcomes[i].total()), acc = 0;
    std::map<BitString, double> g = r.q;
    g[r.messages[i]] += r.p_same;
    std::map<BitString, double> dist;
    r.outcomes[i].for_each([&](const BitString& o, std::uint64_t w) { dist[o] = double(w) / tot; });
    for (auto& [o, p] : dist) acc += std::abs(p - (g.count(o) ? g[o] : 0.0));
    for (auto& [o, p] : g)
      if (!dist.count(o)) acc += p;
    r.sd[i] = acc / 2;
  }
}

// decode(f(left), g(right)) under fresh encodings, per message.
inline TamperReport tamper_experiment(const CodecCfg& c, const std::vector<BitString>& messages, const Tamperer& f,
                                      const Tamperer& g, std::size_t trials, Rng& rng) {
  if (f.n != c.n() || g.n != c.n()) throw LengthMismatch("tamperers act on " + std::to_string(c.n()) + "-bit halves");
  TamperReport r;
  r.messages = messages;
  for (auto& msg : messages) {
    JointDist d(c.m());
    for (std::size_t t = 0; t < trials; ++t) {
      Codeword cw = encode(c, msg, rng);
      d.add(decode(c, {f(cw.left), g(cw.right)}));
    }
    r.outcomes.push_back(std::move(d));
  }
  fit_mixture(r);
  return r;
}

}  // namespace exforge
