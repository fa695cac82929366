#pragma once

// Flat sources, tampering functions, exact joint distributions and
// statistical distance.

#include <algorithm>
#include <cmath>
#include <exception>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "exforge/bitstring.hpp"
#include "exforge/rng.hpp"

namespace exforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_fraction(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}
inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline Rational pow2(long e) {
  BigInt one = 1;
  return e >= 0 ? Rational(BigInt(one << e)) : Rational(one, BigInt(one << -e));
}

// Worker count: EXFORGE_THREADS if set, else the hardware count.
inline unsigned thread_count() {
  if (const char* s = std::getenv("EXFORGE_THREADS")) {
    long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return unsigned(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

class FlatSource {
 public:
  FlatSource(std::size_t n, std::vector<BitString> support) : n_(n), support_(std::move(support)) {
    std::sort(support_.begin(), support_.end());
    support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
    if (support_.empty()) throw RangeError("flat source needs a nonempty support");
    for (auto& s : support_)
      if (s.size() != n_) throw LengthMismatch("support element of wrong length");
  }

  static FlatSource uniform(std::size_t n) {
    if (n > 26) throw ExplosionGuard("uniform source on more than 2^26 points");
    std::vector<BitString> s;
    s.reserve(std::size_t(1) << n);
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << n); ++v) s.push_back(BitString::from_uint(v, n));
    return FlatSource(n, std::move(s));
  }

  // Uniformly random support of exactly 2^k distinct strings.
  static FlatSource random(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n || k > 26) throw RangeError("flat source needs k <= n and k <= 26");
    std::size_t want = std::size_t(1) << k;
    if (k == n) return uniform(n);
    std::set<BitString> s;
    while (s.size() < want) s.insert(rng.bits(n));
    return FlatSource(n, std::vector<BitString>(s.begin(), s.end()));
  }

  std::size_t n() const { return n_; }
  const std::vector<BitString>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  // log2 |support| (exact when the size is a power of two).
  double min_entropy() const { return std::log2(double(support_.size())); }

 private:
  std::size_t n_;
  std::vector<BitString> support_;
};

struct Tamperer {
  std::string id;
  std::size_t n = 0;
  std::function<BitString(const BitString&)> map;
  bool fixed_point_free = false;

  Tamperer(std::string id_, std::size_t n_, std::function<BitString(const BitString&)> f, bool fpf)
      : id(std::move(id_)), n(n_), map(std::move(f)), fixed_point_free(fpf) {
    if (fixed_point_free && n <= 20) {
      for (std::uint64_t v = 0; v < (std::uint64_t(1) << n); ++v) {
        BitString s = BitString::from_uint(v, n);
        if (map(s) == s) throw RangeError("tamperer '" + id + "' has a fixed point at " + s.to_string());
      }
    }
  }

  BitString operator()(const BitString& s) const {
    if (s.size() != n) throw LengthMismatch("tamperer '" + id + "' applied to wrong length");
    return map(s);
  }

  static Tamperer identity(std::size_t n) {
    return Tamperer("identity", n, [](const BitString& s) { return s; }, false);
  }
  static Tamperer flip(std::size_t n, std::size_t i) {
    return Tamperer("flip" + std::to_string(i), n, [i](const BitString& s) {
      BitString r = s;
      r.flip(i);
      return r;
    }, true);
  }
};

namespace detail {

// Unipotent lower-triangular GF(2) matrix with a fixed first row; apply and invert.
struct Unipotent {
  std::size_t n;
  std::vector<BitString> below;  // below[i] has i bits: coefficients of s_0..s_{i-1}

  Unipotent(std::size_t n_, Rng& rng) : n(n_) {
    for (std::size_t i = 0; i < n; ++i) below.push_back(rng.bits(i));
  }
  BitString apply(const BitString& s) const {
    BitString r = s;
    for (std::size_t i = 1; i < n; ++i) {
      bool acc = false;
      for (std::size_t j = 0; j < i; ++j) acc ^= below[i].get(j) && s.get(j);
      if (acc) r.flip(i);
    }
    return r;
  }
  BitString invert(const BitString& u) const {
    BitString s = u;
    for (std::size_t i = 1; i < n; ++i) {
      bool acc = false;
      for (std::size_t j = 0; j < i; ++j) acc ^= below[i].get(j) && s.get(j);
      if (acc) s.flip(i);
    }
    return s;
  }
};

inline BitString increment(const BitString& s) {
  BitString r = s;
  for (std::size_t i = r.size(); i-- > 0;) {
    bool b = r.get(i);
    r.set(i, !b);
    if (!b) break;
  }
  return r;
}

}  // namespace detail

// Adversary suite over n-bit strings. Deterministic in (n, seed).
inline std::vector<Tamperer> tamperer_library(std::size_t n, std::uint64_t seed = 1) {
  if (n < 1) throw RangeError("tamperer library needs n >= 1");
  Rng rng(seed ^ (0x5eedull << 20) ^ n);
  std::vector<Tamperer> lib;
  for (std::size_t i = 0; i < n; ++i) lib.push_back(Tamperer::flip(n, i));

  lib.emplace_back("complement", n, [n](const BitString& s) { return s ^ BitString::ones(n); }, true);

  // Rotation keeps the weight, one flip changes its parity: never a fixed point.
  lib.emplace_back("shift_flip", n, [n](const BitString& s) {
    BitString r = n > 1 ? s.slice(1, n - 1).concat(s.slice(0, 1)) : s;
    r.flip(0);
    return r;
  }, true);

  // A = I + N with N strictly lower triangular, c_0 = 1: (N s)_0 = 0 always,
  // so A s + c = s has no solution while A stays invertible.
  {
    auto a = std::make_shared<detail::Unipotent>(n, rng);
    BitString c = rng.bits(n);
    c.set(0, true);
    lib.emplace_back("affine", n, [a, c](const BitString& s) { return a->apply(s) ^ c; }, true);
  }

  if (n <= 20) {
    // Sattolo's shuffle gives one cycle through all 2^n points.
    std::size_t sz = std::size_t(1) << n;
    auto perm = std::make_shared<std::vector<std::uint32_t>>(sz);
    for (std::size_t i = 0; i < sz; ++i) (*perm)[i] = std::uint32_t(i);
    for (std::size_t i = sz - 1; i > 0; --i) std::swap((*perm)[i], (*perm)[rng.below(i)]);
    lib.emplace_back("perm", n, [perm, n](const BitString& s) {
      return BitString::from_uint((*perm)[s.to_uint()], n);
    }, sz > 1);
  } else {
    // Conjugate of +1 by a random invertible affine map.
    auto a = std::make_shared<detail::Unipotent>(n, rng);
    BitString b = rng.bits(n);
    lib.emplace_back("perm", n, [a, b](const BitString& s) {
      return a->apply(detail::increment(a->invert(s ^ b))) ^ b;
    }, true);
  }

  {
    BitString c = rng.bits(n);
    lib.emplace_back("const", n, [c](const BitString&) { return c; }, false);
  }
  return lib;
}

// Exact distribution over fixed-width outcomes: integer weights over a common
// total, so every probability is an exact rational and they sum to 1.
class JointDist {
 public:
  explicit JointDist(std::size_t width) : width_(width) {
    if (width_ <= kDenseBits) dense_.assign(std::size_t(1) << width_, 0);
  }

  std::size_t width() const { return width_; }
  std::uint64_t total() const { return total_; }

  void add(const BitString& o, std::uint64_t weight = 1) {
    if (o.size() != width_) throw SpaceMismatch("outcome of width " + std::to_string(o.size()) +
                                                " in space of width " + std::to_string(width_));
    if (is_dense()) dense_[o.to_uint()] += weight;
    else sparse_[o] += weight;
    total_ += weight;
  }

  void merge(const JointDist& o) {
    if (o.width_ != width_) throw SpaceMismatch("merging distributions of different widths");
    o.for_each([&](const BitString& b, std::uint64_t w) { add(b, w); });
  }

  std::uint64_t weight(const BitString& o) const {
    if (o.size() != width_) throw SpaceMismatch("outcome width mismatch");
    if (is_dense()) return dense_[o.to_uint()];
    auto it = sparse_.find(o);
    return it == sparse_.end() ? 0 : it->second;
  }
  Rational prob(const BitString& o) const { return Rational(BigInt(weight(o)), BigInt(total_)); }

  // Visits the support in a deterministic order.
  template <class F>
  void for_each(F&& f) const {
    if (is_dense()) {
      for (std::size_t i = 0; i < dense_.size(); ++i)
        if (dense_[i]) f(BitString::from_uint(i, width_), dense_[i]);
    } else {
      std::vector<const std::pair<const BitString, std::uint64_t>*> v;
      for (auto& kv : sparse_) v.push_back(&kv);
      std::sort(v.begin(), v.end(), [](auto a, auto b) { return a->first < b->first; });
      for (auto p : v) f(p->first, p->second);
    }
  }

  std::size_t support_size() const {
    std::size_t c = 0;
    for_each([&](const BitString&, std::uint64_t) { ++c; });
    return c;
  }

  // Push-forward under a deterministic post-processing map.
  template <class F>
  JointDist map(F&& f, std::size_t new_width) const {
    JointDist r(new_width);
    for_each([&](const BitString& b, std::uint64_t w) { r.add(f(b), w); });
    return r;
  }
  JointDist marginal(std::size_t start, std::size_t len) const {
    return map([&](const BitString& b) { return b.slice(start, len); }, len);
  }

  static JointDist point(const BitString& b) {
    JointDist d(b.size());
    d.add(b);
    return d;
  }
  static JointDist uniform(std::size_t width) {
    if (width > 26) throw ExplosionGuard("uniform distribution too wide");
    JointDist d(width);
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << width); ++v) d.add(BitString::from_uint(v, width));
    return d;
  }

 private:
  static constexpr std::size_t kDenseBits = 16;
  bool is_dense() const { return width_ <= kDenseBits; }

  std::size_t width_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> dense_;
  std::unordered_map<BitString, std::uint64_t, BitStringHash> sparse_;
};

// (1/2) sum |p - q|, exact.
inline Rational statistical_distance(const JointDist& p, const JointDist& q) {
  if (p.width() != q.width())
    throw SpaceMismatch("distributions over " + std::to_string(p.width()) + " and " +
                        std::to_string(q.width()) + " bits");
  if (p.total() == 0 || q.total() == 0) throw SpaceMismatch("empty distribution");
  BigInt tp = p.total(), tq = q.total(), acc = 0;
  std::unordered_map<BitString, std::uint64_t, BitStringHash> seen;
  p.for_each([&](const BitString& b, std::uint64_t w) {
    BigInt d = BigInt(w) * tq - BigInt(q.weight(b)) * tp;
    acc += d < 0 ? BigInt(-d) : d;
  });
  q.for_each([&](const BitString& b, std::uint64_t w) {
    if (p.weight(b) == 0) acc += BigInt(w) * tp;
  });
  return Rational(acc, 2 * tp * tq);
}

// SD between a distribution on out∘rest and U_out ⊗ (its rest-marginal),
// where `out` is the first `out_bits` bits of each outcome.
inline Rational distance_from_uniform_prefix(const JointDist& j, std::size_t out_bits) {
  if (out_bits > j.width()) throw SpaceMismatch("prefix wider than outcome");
  if (out_bits > 62) throw RangeError("uniform prefix too wide for exact comparison");
  std::size_t rest_bits = j.width() - out_bits;
  std::unordered_map<BitString, std::pair<std::uint64_t, std::uint64_t>, BitStringHash> rest;  // weight, cells
  j.for_each([&](const BitString& b, std::uint64_t w) {
    auto& r = rest[b.slice(out_bits, rest_bits)];
    r.first += w;
    r.second += 1;
  });
  BigInt m = BigInt(1) << out_bits, acc = 0;
  j.for_each([&](const BitString& b, std::uint64_t w) {
    BigInt d = m * w - BigInt(rest[b.slice(out_bits, rest_bits)].first);
    acc += d < 0 ? BigInt(-d) : d;
  });
  for (auto& [k, r] : rest) acc += (m - r.second) * BigInt(r.first);
  return Rational(acc, 2 * m * BigInt(j.total()));
}

using ExtFn = std::function<BitString(const std::vector<BitString>&)>;

struct EvalSpec {
  std::vector<FlatSource> sources;
  // rounds[j][i]: tamperer applied to source i in tampering round j (null = identity).
  std::vector<std::vector<const Tamperer*>> rounds;
  // Sources whose value, and tampered values where a tamperer is present,
  // are appended to the outcome.
  std::vector<std::size_t> sides;
  std::uint64_t budget = std::uint64_t(1) << 26;
  unsigned threads = 0;
};

// Exact joint law of (ext(x), ext(f^1(x)), ..., conditioned sides) by full
// enumeration of the product support.
inline JointDist eval_extractor_dist(const ExtFn& ext, const EvalSpec& spec) {
  const auto& src = spec.sources;
  if (src.empty()) throw RangeError("no sources");
  long double product = 1;
  for (auto& s : src) product *= (long double)s.size();
  if (product > (long double)spec.budget)
    throw ExplosionGuard("product support " + std::to_string((double)product) + " exceeds budget " +
                         std::to_string(spec.budget));
  for (auto& round : spec.rounds) {
    if (round.size() != src.size()) throw LengthMismatch("tampering round must list every source");
    for (std::size_t i = 0; i < round.size(); ++i)
      if (round[i] && round[i]->n != src[i].n()) throw LengthMismatch("tamperer length differs from source");
  }

  auto outcome = [&](const std::vector<BitString>& xs) {
    BitString o = ext(xs);
    std::vector<std::vector<BitString>> tampered;
    for (auto& round : spec.rounds) {
      std::vector<BitString> ys = xs;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (round[i]) ys[i] = (*round[i])(xs[i]);
      o = o.concat(ext(ys));
      tampered.push_back(std::move(ys));
    }
    for (std::size_t i : spec.sides) {
      o = o.concat(xs[i]);
      for (std::size_t j = 0; j < spec.rounds.size(); ++j)
        if (spec.rounds[j][i]) o = o.concat(tampered[j][i]);
    }
    return o;
  };

  // Outcome width from the first point.
  std::vector<BitString> first;
  for (auto& s : src) first.push_back(s.support()[0]);
  std::size_t width = outcome(first).size();

  unsigned nt = spec.threads ? spec.threads : thread_count();
  nt = std::max(1u, std::min<unsigned>(nt, unsigned(src[0].size())));
  std::vector<JointDist> parts(nt, JointDist(width));
  std::vector<std::exception_ptr> errs(nt);
  auto work = [&](unsigned t) {
    try {
      std::vector<BitString> xs(src.size());
      std::vector<std::size_t> idx(src.size(), 0);
      for (std::size_t o = t; o < src[0].size(); o += nt) {
        xs[0] = src[0].support()[o];
        std::fill(idx.begin() + 1, idx.end(), 0);
        for (;;) {
          for (std::size_t i = 1; i < src.size(); ++i) xs[i] = src[i].support()[idx[i]];
          parts[t].add(outcome(xs));
          std::size_t i = 1;
          while (i < src.size() && ++idx[i] == src[i].size()) idx[i++] = 0;
          if (i == src.size()) break;
        }
      }
    } catch (...) {
      errs[t] = std::current_exception();
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> th;
    for (unsigned t = 0; t < nt; ++t) th.emplace_back(work, t);
    for (auto& x : th) x.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  JointDist all(width);
  for (auto& p : parts) all.merge(p);
  return all;
}

}  // namespace exforge
