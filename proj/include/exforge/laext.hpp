#pragma once

// Alternating extraction, the look-ahead extractor and the merger built on
// L-alternating extraction.

#include <cmath>
#include <string>
#include <vector>

#include "exforge/seeded.hpp"

namespace exforge {

// Wendy holds w, Quentin holds q; every message is s bits.
struct AltExtCfg {
  std::size_t steps = 1;
  std::size_t s = 0;
  SeededExtCfg ext_w;  // (n_w, s) -> s
  SeededExtCfg ext_q;  // (n_q, s) -> s

  static AltExtCfg make(std::size_t steps, std::size_t s, std::size_t n_w, std::size_t n_q) {
    if (steps < 1) throw PlanViolation("alternating extraction needs at least one step");
    return AltExtCfg{steps, s, SeededExtCfg::lhl(n_w, s, s, s), SeededExtCfg::lhl(n_q, s, s, s)};
  }
};

// S_1, R_1 = Ext_w(W, S_1), S_2 = Ext_q(Q, R_1), ..., R_l = Ext_w(W, S_l).
inline std::vector<BitString> la_ext(const AltExtCfg& c, const BitString& w, const BitString& q, const BitString& s1) {
  if (s1.size() != c.s) throw LengthMismatch("S_1 has " + std::to_string(s1.size()) + " bits, cfg says " + std::to_string(c.s));
  std::vector<BitString> r;
  r.reserve(c.steps);
  BitString s = s1;
  for (std::size_t i = 0; i < c.steps; ++i) {
    r.push_back(lhl_extract(c.ext_w, w, s));
    if (i + 1 < c.steps) s = lhl_extract(c.ext_q, q, r.back());
  }
  return r;
}

// Look-ahead extractor with S_1 taken as the prefix of Q.
inline std::vector<BitString> la_ext(const AltExtCfg& c, const BitString& w, const BitString& q) {
  if (q.size() < c.s) throw LengthMismatch("Q is shorter than one message");
  return la_ext(c, w, q, q.slice(0, c.s));
}

// NIPM: L rows of m bits merged against y. Messages are m1 = floor(0.2 m) bits.
struct NipmCfg {
  std::size_t L = 0, m = 0, d = 0;
  AltExtCfg alt;  // ext_w: (d, m1) -> m1, ext_q: (m, m1) -> m1

  std::size_t m1() const { return alt.s; }

  static NipmCfg make(std::size_t L, std::size_t m, std::size_t d) {
    if (L < 1) throw PlanViolation("merger needs at least one row");
    std::size_t m1 = m / 5;
    if (m1 < 1) throw PlanViolation("floor(0.2 m) >= 1 fails for m = " + std::to_string(m));
    NipmCfg c;
    c.L = L;
    c.m = m;
    c.d = d;
    c.alt = AltExtCfg::make(L, m1, d, m);
    return c;
  }

  // m >= 4cL log(d/eps) and d' >= 4cL log(m/eps); returns the failing one or "".
  std::string ledger_failure(double c, double eps, double d_entropy) const {
    if (double(m) < 4 * c * double(L) * std::log2(double(d) / eps)) return "m >= 4cL log(d/eps)";
    if (d_entropy < 4 * c * double(L) * std::log2(double(m) / eps)) return "d' >= 4cL log(m/eps)";
    return "";
  }
};

inline BitString nipm(const NipmCfg& c, const std::vector<BitString>& rows, const BitString& y) {
  if (rows.size() != c.L) throw RowLengthMismatch("merger got " + std::to_string(rows.size()) + " rows, cfg says " + std::to_string(c.L));
  for (auto& row : rows)
    if (row.size() != c.m) throw RowLengthMismatch("row of " + std::to_string(row.size()) + " bits, cfg says " + std::to_string(c.m));
  if (y.size() != c.d) throw LengthMismatch("merger seed has " + std::to_string(y.size()) + " bits, cfg says " + std::to_string(c.d));
  BitString s = rows[0].slice(0, c.m1());
  for (std::size_t i = 1; i < c.L; ++i) {
    BitString r = lhl_extract(c.alt.ext_w, y, s);
    s = lhl_extract(c.alt.ext_q, rows[i], r);
  }
  return s;
}

}  // namespace exforge
