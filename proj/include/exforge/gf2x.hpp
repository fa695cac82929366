#pragma once

// Binary polynomials and GF(2^N) for arbitrary N. Elements travel as
// BitStrings of length N, first bit = coefficient of x^(N-1); for N <= 64 this
// makes BitString::to_uint() the usual integer encoding of the polynomial.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "exforge/bitstring.hpp"

namespace exforge::gf2 {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Carry-less 64x64 -> 128 product, 4-bit window.
inline u128 clmul(u64 a, u64 b) {
  u128 tab[16];
  tab[0] = 0;
  tab[1] = a;
  for (int i = 2; i < 16; i += 2) {
    tab[i] = tab[i / 2] << 1;
    tab[i + 1] = tab[i] ^ a;
  }
  u128 r = 0;
  for (int s = 60; s >= 0; s -= 4) r = (r << 4) ^ tab[(b >> s) & 15];
  return r;
}

// Low part (f - x^N) of the smallest irreducible polynomial of each degree
// 1..64, ordered by integer value.
inline constexpr std::array<u64, 65> kSmallestIrreducibleLow = {
    0,    0x1,  0x3,  0x3,  0x3,  0x5,  0x3,  0x3,  0x1b, 0x3,  0x9,  0x5,  0x9,  0x1b,
    0x21, 0x3,  0x2b, 0x9,  0x9,  0x27, 0x9,  0x5,  0x3,  0x21, 0x1b, 0x9,  0x1b, 0x27,
    0x3,  0x5,  0x3,  0x9,  0x8d, 0x4b, 0x1b, 0x5,  0x35, 0x3f, 0x63, 0x11, 0x39, 0x9,
    0x27, 0x59, 0x21, 0x1b, 0x3,  0x21, 0x2d, 0x71, 0x1d, 0x4b, 0x9,  0x47, 0x7d, 0x47,
    0x95, 0x11, 0x63, 0x7b, 0x3,  0x27, 0x69, 0x3,  0x1b};

// Dense polynomial, little-endian words (bit j of word i = coefficient of x^(64i+j)).
struct Poly {
  std::vector<u64> w;

  static Poly monomial(std::size_t e) {
    Poly p;
    p.w.assign(e / 64 + 1, 0);
    p.w[e / 64] |= u64(1) << (e % 64);
    return p;
  }
  static Poly from_u64(u64 v) { return Poly{{v}}.normalized(); }

  Poly normalized() const {
    Poly p = *this;
    while (!p.w.empty() && p.w.back() == 0) p.w.pop_back();
    return p;
  }
  bool is_zero() const {
    for (u64 x : w)
      if (x) return false;
    return true;
  }
  // -1 for the zero polynomial.
  long degree() const {
    for (std::size_t i = w.size(); i-- > 0;)
      if (w[i]) return long(64 * i + 63 - std::countl_zero(w[i]));
    return -1;
  }
  bool coeff(std::size_t e) const { return e / 64 < w.size() && ((w[e / 64] >> (e % 64)) & 1); }
  void flip(std::size_t e) {
    if (e / 64 >= w.size()) w.resize(e / 64 + 1, 0);
    w[e / 64] ^= u64(1) << (e % 64);
  }

  friend Poly operator^(const Poly& a, const Poly& b) {
    Poly r;
    r.w.assign(std::max(a.w.size(), b.w.size()), 0);
    for (std::size_t i = 0; i < a.w.size(); ++i) r.w[i] ^= a.w[i];
    for (std::size_t i = 0; i < b.w.size(); ++i) r.w[i] ^= b.w[i];
    return r.normalized();
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.w.empty() || b.w.empty()) return Poly{};
    std::vector<u64> r(a.w.size() + b.w.size(), 0);
    for (std::size_t i = 0; i < a.w.size(); ++i) {
      if (!a.w[i]) continue;
      for (std::size_t j = 0; j < b.w.size(); ++j) {
        u128 p = clmul(a.w[i], b.w[j]);
        r[i + j] ^= u64(p);
        r[i + j + 1] ^= u64(p >> 64);
      }
    }
    return Poly{r}.normalized();
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.normalized().w == b.normalized().w; }

  // Remainder modulo m (m nonzero).
  Poly mod(const Poly& m) const {
    long dm = m.degree();
    Poly r = normalized();
    long dr = r.degree();
    std::vector<std::size_t> terms;
    for (long e = 0; e < dm; ++e)
      if (m.coeff(std::size_t(e))) terms.push_back(std::size_t(e));
    for (long i = dr; i >= dm; --i) {
      if (!r.coeff(std::size_t(i))) continue;
      r.flip(std::size_t(i));
      for (std::size_t e : terms) r.flip(std::size_t(i - dm) + e);
    }
    return r.normalized();
  }
};

inline Poly gcd(Poly a, Poly b) {
  a = a.normalized();
  b = b.normalized();
  while (!b.is_zero()) {
    Poly t = a.mod(b);
    a = b;
    b = t;
  }
  return a;
}

// Rabin's test: f of degree N is irreducible iff x^(2^N) = x mod f and
// gcd(x^(2^(N/q)) - x, f) = 1 for every prime q dividing N.
inline bool is_irreducible(const Poly& f) {
  long n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  if (!f.coeff(0)) return false;
  Poly x = Poly::monomial(1);
  std::vector<long> primes;
  for (long q = 2, m = n; q <= m; ++q)
    if (m % q == 0) {
      primes.push_back(q);
      while (m % q == 0) m /= q;
    }
  // squares[k] = x^(2^k) mod f
  std::vector<Poly> squares{x};
  for (long k = 1; k <= n; ++k) squares.push_back((squares.back() * squares.back()).mod(f));
  if (!(squares[std::size_t(n)] == x)) return false;
  for (long q : primes) {
    Poly g = gcd(f, squares[std::size_t(n / q)] ^ x);
    if (g.degree() != 0) return false;
  }
  return true;
}

// Smallest irreducible polynomial of degree N by integer value. Table for
// N <= 64, search beyond (cached).
inline Poly canonical_modulus(std::size_t n) {
  if (n == 0) throw RangeError("field degree must be positive");
  if (n <= 64) {
    Poly f = Poly::monomial(n);
    f.w[0] ^= kSmallestIrreducibleLow[n];
    return f.normalized();
  }
  static std::mutex mu;
  static std::map<std::size_t, Poly> cache;
  std::lock_guard<std::mutex> lk(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  // Cheap trial division by small irreducibles before the full test.
  std::vector<Poly> small;
  for (std::size_t d = 1; d <= 8; ++d)
    for (u64 v = u64(1) << d; v < (u64(2) << d); ++v)
      if (is_irreducible(Poly::from_u64(v))) small.push_back(Poly::from_u64(v));
  for (u64 low = 1;; low += 2) {
    Poly f = Poly::monomial(n);
    f.w[0] ^= low;
    bool skip = false;
    for (auto& g : small)
      if (f.mod(g).is_zero()) {
        skip = true;
        break;
      }
    if (!skip && is_irreducible(f)) {
      cache[n] = f;
      return f;
    }
  }
}

// GF(2^N) with the canonical modulus.
class WideField {
 public:
  explicit WideField(std::size_t n) : n_(n), f_(canonical_modulus(n)) {
    if (n <= 64) g_ = kSmallestIrreducibleLow[n];
    for (std::size_t e = 0; e < n; ++e)
      if (f_.coeff(e)) terms_.push_back(e);
  }

  std::size_t degree() const { return n_; }
  const Poly& modulus() const { return f_; }

  BitString zero() const { return BitString(n_); }
  BitString one() const {
    BitString b(n_);
    b.set(n_ - 1, true);
    return b;
  }

  // Product of two u64-encoded elements (N <= 64).
  u64 mul_u64(u64 a, u64 b) const {
    u128 p = clmul(a, b);
    const u128 mask = n_ == 64 ? ~u64(0) : (u128(1) << n_) - 1;
    while (p >> n_) {
      u128 h = p >> n_;
      p &= mask;
      // h < 2^(N-1+...) stays below 2^64 for N <= 64 after the first pass.
      u64 hl = u64(h), hh = u64(h >> 64);
      p ^= clmul(hl, g_);
      if (hh) p ^= clmul(hh, g_) << 64;
    }
    return u64(p);
  }

  BitString mul(const BitString& a, const BitString& b) const {
    check(a);
    check(b);
    if (n_ <= 64) return BitString::from_uint(mul_u64(a.to_uint(), b.to_uint()), n_);
    return from_poly((to_poly(a) * to_poly(b)).mod(f_));
  }

  BitString add(const BitString& a, const BitString& b) const {
    check(a);
    check(b);
    return a ^ b;
  }

  // a^(2^N - 2) = product of a^(2^i), i = 1..N-1.
  BitString inv(const BitString& a) const {
    check(a);
    if (a.is_zero()) throw DivisionByZero("inverse of zero in GF(2^" + std::to_string(n_) + ")");
    if (n_ <= 64) return BitString::from_uint(inv_u64(a.to_uint()), n_);
    BitString s = a, r = one();
    for (std::size_t i = 1; i < n_; ++i) {
      s = mul(s, s);
      r = mul(r, s);
    }
    return r;
  }

  u64 inv_u64(u64 a) const {
    if (!a) throw DivisionByZero("inverse of zero in GF(2^" + std::to_string(n_) + ")");
    u64 s = a, r = 1;
    for (std::size_t i = 1; i < n_; ++i) {
      s = mul_u64(s, s);
      r = mul_u64(r, s);
    }
    return r;
  }

  Poly to_poly(const BitString& a) const {
    Poly p;
    p.w.assign((a.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.get(i)) p.w[(a.size() - 1 - i) / 64] |= u64(1) << ((a.size() - 1 - i) % 64);
    return p.normalized();
  }
  BitString from_poly(const Poly& p) const {
    BitString b(n_);
    for (std::size_t e = 0; e < n_; ++e)
      if (p.coeff(e)) b.set(n_ - 1 - e, true);
    return b;
  }

 private:
  void check(const BitString& a) const {
    if (a.size() != n_)
      throw LengthMismatch("element of " + std::to_string(a.size()) + " bits in GF(2^" + std::to_string(n_) + ")");
  }

  std::size_t n_;
  Poly f_;
  u64 g_ = 0;
  std::vector<std::size_t> terms_;
};

// Shared, lazily built field per degree.
inline std::shared_ptr<const WideField> wide_field(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const WideField>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const WideField>(n);
  return slot;
}

}  // namespace exforge::gf2
