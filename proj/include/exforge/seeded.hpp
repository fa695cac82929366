#pragma once

// Strong seeded extraction by leftover hashing over GF(2^(d+1)).

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "exforge/bitstring.hpp"
#include "exforge/distrib.hpp"
#include "exforge/gf2x.hpp"

namespace exforge {

// Error bound of the form sum_i sqrt(q_i), q_i rational. One term compares
// exactly against a rational distance by squaring; sums fall back to 100
// significant digits.
class ErrorBound {
 public:
  using Float = boost::multiprecision::cpp_bin_float_100;

  ErrorBound() = default;
  static ErrorBound sqrt_of(const Rational& q) {
    ErrorBound b;
    b.terms_.push_back(q);
    return b;
  }
  // 2^(h/2)
  static ErrorBound pow2_half(long h) { return sqrt_of(pow2(h)); }
  static ErrorBound exact(const Rational& v) { return sqrt_of(v * v); }

  ErrorBound operator+(const ErrorBound& o) const {
    ErrorBound r = *this;
    r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
    return r;
  }

  const std::vector<Rational>& terms() const { return terms_; }

  Float value() const {
    Float v = 0;
    for (auto& q : terms_) v += boost::multiprecision::sqrt(Float(q));
    return v;
  }
  double to_double() const { return value().convert_to<double>(); }

  // Exact value when every term is the square of a rational.
  std::optional<Rational> exact_value() const {
    Rational v = 0;
    for (auto& q : terms_) {
      BigInt a = boost::multiprecision::numerator(q), b = boost::multiprecision::denominator(q);
      BigInt ra = boost::multiprecision::sqrt(a), rb = boost::multiprecision::sqrt(b);
      if (ra * ra != a || rb * rb != b) return std::nullopt;
      v += Rational(ra, rb);
    }
    return v;
  }

  // Is sd <= this bound?
  bool admits(const Rational& sd) const {
    if (sd <= 0) return true;
    if (terms_.empty()) return false;
    if (terms_.size() == 1) return sd * sd <= terms_[0];
    if (auto v = exact_value()) return sd <= *v;
    return Float(sd) <= value();
  }

  std::string describe() const {
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) s += (i ? " + " : "") + std::string("sqrt(") + to_fraction(terms_[i]) + ")";
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<Rational> terms_;
};

// Ext: {0,1}^n x {0,1}^d -> {0,1}^m with design min-entropy k.
//
// When m <= d+1 the whole source is hashed against y' = y∘1; when m > d+1 the
// source is cut into J = ceil(m/(d+1)) contiguous parts, each hashed with the
// same seed, and the outputs are concatenated.
struct SeededExtCfg {
  std::size_t n = 0, d = 0, m = 0, k = 0;
  ErrorBound eps_bound;

  static SeededExtCfg lhl(std::size_t n, std::size_t d, std::size_t m, std::size_t k) {
    SeededExtCfg c{n, d, m, k, {}};
    c.validate();
    c.eps_bound = c.design_bound();
    return c;
  }

  std::size_t field_bits() const { return d + 1; }
  std::size_t blocks() const { return m <= d + 1 ? 1 : (m + d) / (d + 1); }

  void validate() const {
    if (d < 1) throw PlanViolation("seed length must be at least 1 bit");
    if (m < 1) throw PlanViolation("output length must be at least 1 bit");
    if (n < blocks())
      throw PlanViolation("source of " + std::to_string(n) + " bits cannot feed " + std::to_string(blocks()) +
                          " output blocks");
  }

  // LHL: 2^((m-k)/2 - 1) = sqrt(2^(m-k-2)). Block mode sums the per-block
  // bounds with the entropy left after discounting the other parts.
  ErrorBound design_bound() const {
    std::size_t J = blocks();
    if (J == 1) return ErrorBound::pow2_half(long(m) - long(k) - 2);
    ErrorBound b;
    for (std::size_t j = 0; j < J; ++j) {
      std::size_t nj = part_end(j) - part_begin(j);
      long kj = long(k) - long(n - nj);
      long mj = long(j + 1 < J ? d + 1 : m - (J - 1) * (d + 1));
      b = b + ErrorBound::pow2_half(mj - kj - 2);
    }
    return b;
  }

  std::size_t part_begin(std::size_t j) const { return j * n / blocks(); }
  std::size_t part_end(std::size_t j) const { return (j + 1) * n / blocks(); }
};

namespace detail {

// sum_i b_i y'^(i+1) over the (d+1)-bit chunks b_i of x[begin, end).
inline gf2::u64 lhl_hash_u64(const gf2::WideField& f, const BitString& x, std::size_t begin, std::size_t end,
                             gf2::u64 y) {
  std::size_t N = f.degree();
  std::size_t L = (end - begin + N - 1) / N;
  gf2::u64 acc = 0;
  for (std::size_t i = L; i-- > 0;) {
    std::size_t s = begin + i * N;
    std::size_t len = std::min(N, end - s);
    gf2::u64 chunk = x.read_uint(s, len) << (N - len);
    acc = f.mul_u64(acc ^ chunk, y);
  }
  return acc;
}

inline BitString lhl_hash_wide(const gf2::WideField& f, const BitString& x, std::size_t begin, std::size_t end,
                               const BitString& y) {
  std::size_t N = f.degree();
  std::size_t L = (end - begin + N - 1) / N;
  BitString acc(N);
  for (std::size_t i = L; i-- > 0;) {
    std::size_t s = begin + i * N;
    std::size_t len = std::min(N, end - s);
    acc = f.mul(acc ^ x.slice(s, len).resized(N), y);
  }
  return acc;
}

}  // namespace detail

inline BitString lhl_extract(const SeededExtCfg& cfg, const BitString& x, const BitString& y) {
  if (x.size() != cfg.n) throw LengthMismatch("source has " + std::to_string(x.size()) + " bits, cfg says " + std::to_string(cfg.n));
  if (y.size() != cfg.d) throw LengthMismatch("seed has " + std::to_string(y.size()) + " bits, cfg says " + std::to_string(cfg.d));
  const std::size_t N = cfg.d + 1;
  auto f = gf2::wide_field(N);
  const std::size_t J = cfg.blocks();
  BitString out(cfg.m);
  std::size_t pos = 0;
  if (N <= 64) {
    gf2::u64 yp = (y.to_uint() << 1) | 1;
    for (std::size_t j = 0; j < J; ++j) {
      std::size_t mj = std::min(N, cfg.m - pos);
      std::size_t b = J == 1 ? 0 : cfg.part_begin(j), e = J == 1 ? cfg.n : cfg.part_end(j);
      gf2::u64 h = detail::lhl_hash_u64(*f, x, b, e, yp) >> (N - mj);
      for (std::size_t i = 0; i < mj; ++i)
        if ((h >> (mj - 1 - i)) & 1) out.set(pos + i, true);
      pos += mj;
    }
    return out;
  }
  BitString yp = y.concat(BitString::ones(1));
  for (std::size_t j = 0; j < J; ++j) {
    std::size_t mj = std::min(N, cfg.m - pos);
    std::size_t b = J == 1 ? 0 : cfg.part_begin(j), e = J == 1 ? cfg.n : cfg.part_end(j);
    BitString h = detail::lhl_hash_wide(*f, x, b, e, yp).slice(0, mj);
    for (std::size_t i = 0; i < mj; ++i)
      if (h.get(i)) out.set(pos + i, true);
    pos += mj;
  }
  return out;
}

// Worst-case (k, eps) => average-case (k + slack, eps + 2^-slack).
inline SeededExtCfg avg_case_wrap(const SeededExtCfg& cfg, std::size_t slack) {
  if (slack < 1) throw RangeError("average-case slack must be at least 1 bit");
  SeededExtCfg r = cfg;
  r.k += slack;
  r.eps_bound = cfg.eps_bound + ErrorBound::exact(pow2(-long(slack)));
  return r;
}

}  // namespace exforge
