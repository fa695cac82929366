#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "exforge/error.hpp"

namespace exforge {

// Fixed-length bit vector. Bit 0 is the first (most significant) bit; it is
// stored in the top bit of word 0. Bits past `len` in the last word are kept
// zero so that equality and hashing can work on whole words.
class BitString {
 public:
  using Word = std::uint64_t;
  using Storage = boost::container::small_vector<Word, 2>;

  BitString() = default;
  explicit BitString(std::size_t len) : len_(len), w_(nwords(len), 0) {}

  // The low `len` bits of v, most significant first.
  static BitString from_uint(std::uint64_t v, std::size_t len) {
    if (len > 64) throw RangeError("from_uint supports at most 64 bits");
    BitString b(len);
    if (len) b.w_[0] = v << (64 - len);
    if (len < 64 && len) b.w_[0] &= ~Word(0) << (64 - len);
    return b;
  }

  static BitString from_string(std::string_view s) {
    BitString b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') b.set(i, true);
      else if (s[i] != '0') throw ParseError("bit string may contain only 0 and 1");
    }
    return b;
  }

  // Hex digits, most significant first. Takes the first `len` bits; the digits
  // must cover them and any surplus bits must be zero.
  static BitString from_hex(std::string_view h, std::size_t len) {
    if (h.size() >= 2 && h[0] == '0' && (h[1] == 'x' || h[1] == 'X')) h.remove_prefix(2);
    if (h.size() * 4 < len) throw ParseError("hex string too short for " + std::to_string(len) + " bits");
    BitString full(h.size() * 4);
    for (std::size_t i = 0; i < h.size(); ++i) {
      int v = hexval(h[i]);
      for (int j = 0; j < 4; ++j) full.set(4 * i + j, (v >> (3 - j)) & 1);
    }
    for (std::size_t i = len; i < full.size(); ++i)
      if (full.get(i)) throw ParseError("hex string has bits beyond length " + std::to_string(len));
    return full.slice(0, len);
  }

  static BitString ones(std::size_t len) {
    BitString b(len);
    for (auto& w : b.w_) w = ~Word(0);
    b.trim();
    return b;
  }

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool get(std::size_t i) const {
    if (i >= len_) throw RangeError("bit index " + std::to_string(i) + " out of range " + std::to_string(len_));
    return (w_[i >> 6] >> (63 - (i & 63))) & 1;
  }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool v) {
    if (i >= len_) throw RangeError("bit index " + std::to_string(i) + " out of range " + std::to_string(len_));
    Word m = Word(1) << (63 - (i & 63));
    if (v) w_[i >> 6] |= m;
    else w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { set(i, !get(i)); }

  // Value of the string read as a big-endian integer (len <= 64).
  std::uint64_t to_uint() const {
    if (len_ > 64) throw RangeError("to_uint needs len <= 64");
    if (len_ == 0) return 0;
    return w_[0] >> (64 - len_);
  }

  // Bits [start, start+len) as an integer (len <= 64); bits past the end read
  // as zero, which is the padding convention for folding.
  std::uint64_t read_uint(std::size_t start, std::size_t len) const {
    if (len == 0 || start >= len_) return 0;
    std::size_t ws = start >> 6, off = start & 63;
    Word v = w_[ws] << off;
    if (off && ws + 1 < w_.size()) v |= w_[ws + 1] >> (64 - off);
    return len == 64 ? v : v >> (64 - len);
  }

  BitString slice(std::size_t start, std::size_t len) const {
    if (start > len_ || len > len_ - start)
      throw RangeError("slice [" + std::to_string(start) + ", +" + std::to_string(len) +
                       ") exceeds length " + std::to_string(len_));
    BitString r(len);
    if (len == 0) return r;
    std::size_t ws = start >> 6, off = start & 63;
    for (std::size_t j = 0; j < r.w_.size(); ++j) {
      Word hi = w_[ws + j] << off;
      Word lo = (off && ws + j + 1 < w_.size()) ? (w_[ws + j + 1] >> (64 - off)) : 0;
      r.w_[j] = hi | lo;
    }
    r.trim();
    return r;
  }

  BitString concat(const BitString& b) const {
    BitString r(len_ + b.len_);
    std::copy(w_.begin(), w_.end(), r.w_.begin());
    r.or_at(len_, b);
    return r;
  }

  BitString operator^(const BitString& o) const {
    BitString r = *this;
    r ^= o;
    return r;
  }
  BitString& operator^=(const BitString& o) {
    if (o.len_ != len_)
      throw LengthMismatch("xor of " + std::to_string(len_) + " and " + std::to_string(o.len_) + " bits");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }

  BitString reversed() const {
    BitString r(len_);
    for (std::size_t i = 0; i < len_; ++i)
      if (get(i)) r.set(len_ - 1 - i, true);
    return r;
  }

  // Zero-extend (or cut) on the low side to `len` bits.
  BitString resized(std::size_t len) const {
    if (len <= len_) return slice(0, len);
    BitString r(len);
    std::copy(w_.begin(), w_.end(), r.w_.begin());
    return r;
  }

  bool is_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](Word w) { return w == 0; });
  }
  std::size_t popcount() const {
    std::size_t c = 0;
    for (Word w : w_) c += std::popcount(w);
    return c;
  }

  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  // Hex of the zero-padded string, most significant digit first.
  std::string to_hex() const {
    static const char* d = "0123456789abcdef";
    std::string s((len_ + 3) / 4, '0');
    for (std::size_t i = 0; i < s.size(); ++i) {
      int v = 0;
      for (int j = 0; j < 4; ++j) {
        std::size_t k = 4 * i + j;
        v = (v << 1) | (k < len_ ? int(get(k)) : 0);
      }
      s[i] = d[v];
    }
    return s;
  }

  // Packed bytes, MSB-first, last byte zero-padded on the low side.
  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((len_ + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::uint8_t(w_[i >> 3] >> (56 - 8 * (i & 7)));
    return out;
  }

  static BitString from_bytes(const std::uint8_t* p, std::size_t len) {
    BitString b(len);
    std::size_t nb = (len + 7) / 8;
    for (std::size_t i = 0; i < nb; ++i) b.w_[i >> 3] |= Word(p[i]) << (56 - 8 * (i & 7));
    if (b.trim_changed()) throw FormatError("nonzero padding bits");
    return b;
  }

  // 4-byte big-endian bit length, then packed bytes.
  std::vector<std::uint8_t> serialize() const {
    if (len_ > 0xffffffffu) throw RangeError("string too long to serialize");
    std::vector<std::uint8_t> out;
    for (int s = 24; s >= 0; s -= 8) out.push_back(std::uint8_t(len_ >> s));
    auto body = to_bytes();
    out.insert(out.end(), body.begin(), body.end());
    return out;
  }

  // Parses one serialized string at `pos`, advancing it.
  static BitString deserialize(const std::vector<std::uint8_t>& in, std::size_t& pos) {
    if (in.size() < pos + 4) throw FormatError("truncated length header");
    std::size_t len = 0;
    for (int i = 0; i < 4; ++i) len = (len << 8) | in[pos + i];
    pos += 4;
    std::size_t nb = (len + 7) / 8;
    if (in.size() < pos + nb) throw FormatError("truncated bit payload");
    BitString b = from_bytes(in.data() + pos, len);
    pos += nb;
    return b;
  }

  const Storage& words() const { return w_; }
  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull ^ len_;
    for (Word w : w_) {
      h ^= w;
      h *= 0x100000001b3ull;
      h ^= h >> 29;
    }
    return std::size_t(h);
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.len_ == b.len_ && std::equal(a.w_.begin(), a.w_.end(), b.w_.begin());
  }
  // Shorter strings first, then lexicographic (which is numeric for equal lengths).
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    if (a.len_ != b.len_) return a.len_ <=> b.len_;
    for (std::size_t i = 0; i < a.w_.size(); ++i)
      if (a.w_[i] != b.w_[i]) return a.w_[i] <=> b.w_[i];
    return std::strong_ordering::equal;
  }

 private:
  static std::size_t nwords(std::size_t len) { return (len + 63) / 64; }
  static int hexval(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ParseError(std::string("bad hex digit '") + c + "'");
  }
  void trim() {
    if (len_ & 63) w_.back() &= ~Word(0) << (64 - (len_ & 63));
  }
  bool trim_changed() {
    if (!(len_ & 63) || w_.empty()) return false;
    Word before = w_.back();
    trim();
    return before != w_.back();
  }
  // OR b into this string starting at bit `at` (caller guarantees room).
  void or_at(std::size_t at, const BitString& b) {
    std::size_t ws = at >> 6, off = at & 63;
    for (std::size_t j = 0; j < b.w_.size(); ++j) {
      w_[ws + j] |= b.w_[j] >> off;
      if (off && ws + j + 1 < w_.size()) w_[ws + j + 1] |= b.w_[j] << (64 - off);
    }
  }

  std::size_t len_ = 0;
  Storage w_;
};

inline BitString slice(const BitString& x, std::size_t start, std::size_t len) { return x.slice(start, len); }
inline BitString concat(const BitString& a, const BitString& b) { return a.concat(b); }
// `xor` is a reserved alternative token in C++.
inline BitString bxor(const BitString& a, const BitString& b) { return a ^ b; }

template <class... Rest>
BitString concat(const BitString& a, const BitString& b, const Rest&... rest) {
  return concat(a.concat(b), rest...);
}

inline BitString concat_all(const std::vector<BitString>& parts) {
  BitString acc;
  for (auto& p : parts) acc = acc.concat(p);
  return acc;
}

struct BitStringHash {
  std::size_t operator()(const BitString& b) const { return b.hash(); }
};

}  // namespace exforge

template <>
struct std::hash<exforge::BitString> {
  std::size_t operator()(const exforge::BitString& b) const { return b.hash(); }
};
