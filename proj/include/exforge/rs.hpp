#pragma once

// Reed-Solomon encoding over GF(2^w) and the seeded distinct-symbol sampler
// used to turn codewords into short advice strings.

#include <string>
#include <vector>

#include "exforge/bitstring.hpp"
#include "exforge/gf.hpp"

namespace exforge {

// w-bit chunks, MSB-first; a short last chunk is zero-padded on the low side.
inline std::vector<Sym> to_symbols(const BitString& b, unsigned w) {
  std::vector<Sym> v;
  for (std::size_t s = 0; s < b.size(); s += w) v.push_back(Sym(b.read_uint(s, w)));
  return v;
}

inline BitString from_symbols(const std::vector<Sym>& v, unsigned w) {
  BitString b;
  for (Sym s : v) b = b.concat(BitString::from_uint(s, w));
  return b;
}

struct RSCode {
  FieldRef field;
  std::size_t n0 = 0, n = 0;  // message and codeword symbols

  RSCode() = default;
  RSCode(unsigned w, std::size_t n0_, std::size_t n_) : field(FieldCtx::canonical(w)), n0(n0_), n(n_) {
    if (n0 < 1 || n0 > n) throw RangeError("need 1 <= n0 <= n");
    if (n > field->order()) throw RangeError("codeword longer than the field");
  }

  unsigned w() const { return field->w(); }
  std::size_t distance() const { return n - n0 + 1; }

  // Evaluation point i is the field element with value i.
  Sym at(const std::vector<Sym>& msg, std::size_t i) const {
    Sym p = Sym(i), acc = 0;
    for (std::size_t j = msg.size(); j-- > 0;) acc = field->mul(acc, p) ^ msg[j];
    return acc;
  }
};

// msg[j] is the coefficient of x^j.
inline std::vector<Sym> rs_encode(const RSCode& code, const std::vector<Sym>& msg) {
  if (msg.size() != code.n0)
    throw LengthMismatch("message of " + std::to_string(msg.size()) + " symbols, code takes " + std::to_string(code.n0));
  std::vector<Sym> out(code.n);
  for (std::size_t i = 0; i < code.n; ++i) out[i] = code.at(msg, i);
  return out;
}

inline std::vector<FieldElement> rs_encode(const RSCode& code, const std::vector<FieldElement>& msg) {
  std::vector<Sym> v;
  for (auto& e : msg) {
    if (!(*e.ctx() == *code.field)) throw CtxMismatch("message symbol from another field");
    v.push_back(e.value());
  }
  std::vector<FieldElement> out;
  for (Sym s : rs_encode(code, v)) out.emplace_back(code.field, s);
  return out;
}

// Successive w-bit chunks of z reduced mod n, duplicates skipped. If the
// chunks run out first, the smallest unused positions fill the remainder.
inline std::vector<std::size_t> sample_positions(const BitString& z, unsigned w, std::size_t n, std::size_t count) {
  if (count > n) throw CountExceedsUniverse(std::to_string(count) + " distinct positions out of " + std::to_string(n));
  if (z.size() < count * w)
    throw InsufficientSeed("sampling " + std::to_string(count) + " symbols needs " + std::to_string(count * w) +
                           " bits, got " + std::to_string(z.size()));
  std::vector<std::size_t> pos;
  std::vector<bool> used(n, false);
  for (std::size_t s = 0; s + w <= z.size() && pos.size() < count; s += w) {
    std::size_t p = std::size_t(z.read_uint(s, w) % n);
    if (!used[p]) {
      used[p] = true;
      pos.push_back(p);
    }
  }
  for (std::size_t p = 0; pos.size() < count; ++p)
    if (!used[p]) {
      used[p] = true;
      pos.push_back(p);
    }
  return pos;
}

inline BitString sample_symbols(const BitString& z, const std::vector<Sym>& codeword, unsigned w, std::size_t count) {
  BitString out;
  for (auto p : sample_positions(z, w, codeword.size(), count)) out = out.concat(BitString::from_uint(codeword[p], w));
  return out;
}

// Same selection without materialising the codeword.
inline BitString sample_rs_symbols(const RSCode& code, const std::vector<Sym>& msg, const BitString& z, std::size_t count) {
  if (msg.size() != code.n0) throw LengthMismatch("message length differs from code");
  BitString out;
  for (auto p : sample_positions(z, code.w(), code.n, count)) out = out.concat(BitString::from_uint(code.at(msg, p), code.w()));
  return out;
}

}  // namespace exforge
