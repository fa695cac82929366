#pragma once

// GF(2^w), 1 <= w <= 32, plus exact linear algebra over it.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "exforge/bitstring.hpp"
#include "exforge/gf2x.hpp"
#include "exforge/rng.hpp"

namespace exforge {

using Sym = std::uint32_t;  // field element value, bit j = coefficient of x^j

class FieldCtx {
 public:
  // Canonical context for width w (shared; reproducible from w alone).
  static std::shared_ptr<const FieldCtx> canonical(unsigned w) {
    static std::mutex mu;
    static std::map<unsigned, std::shared_ptr<const FieldCtx>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[w];
    if (!slot) slot = std::make_shared<const FieldCtx>(w, canonical_poly(w));
    return slot;
  }

  static std::uint64_t canonical_poly(unsigned w) {
    if (w < 1 || w > 32) throw RangeError("field width must be in 1..32");
    return (std::uint64_t(1) << w) | gf2::kSmallestIrreducibleLow[w];
  }

  // `poly` includes the x^w term.
  FieldCtx(unsigned w, std::uint64_t poly) : w_(w), poly_(poly) {
    if (w < 1 || w > 32) throw RangeError("field width must be in 1..32");
    if ((poly >> w) != 1) throw RangeError("modulus degree does not match width");
    bool irreducible = w <= 16 ? irreducible_by_trial_division(poly, w)
                               : poly == canonical_poly(w);
    if (!irreducible) throw RangeError("modulus is not irreducible");
  }

  unsigned w() const { return w_; }
  std::uint64_t poly() const { return poly_; }
  std::uint64_t order() const { return std::uint64_t(1) << w_; }

  Sym add(Sym a, Sym b) const { return a ^ b; }
  Sym mul(Sym a, Sym b) const {
    std::uint64_t r = 0, x = a;
    for (; b; b >>= 1) {
      if (b & 1) r ^= x;
      x <<= 1;
      if (x >> w_) x ^= poly_;
    }
    return Sym(r);
  }
  Sym pow(Sym a, std::uint64_t e) const {
    Sym r = 1;
    for (; e; e >>= 1) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
    }
    return r;
  }
  Sym inv(Sym a) const {
    if (a == 0) throw DivisionByZero("inverse of zero in GF(2^" + std::to_string(w_) + ")");
    return pow(a, order() - 2);
  }

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.w_ == b.w_ && a.poly_ == b.poly_; }

 private:
  // Exhaustive check: no factor of degree 1..w/2.
  static bool irreducible_by_trial_division(std::uint64_t f, unsigned w) {
    auto deg = [](std::uint64_t p) { return 63 - std::countl_zero(p); };
    auto rem = [&](std::uint64_t a, std::uint64_t b) {
      int db = deg(b);
      while (a && deg(a) >= db) a ^= b << (deg(a) - db);
      return a;
    };
    for (std::uint64_t g = 2; g < (std::uint64_t(1) << (w / 2 + 1)); ++g)
      if (rem(f, g) == 0) return false;
    return true;
  }

  unsigned w_;
  std::uint64_t poly_;
};

using FieldRef = std::shared_ptr<const FieldCtx>;

class FieldElement {
 public:
  FieldElement(FieldRef ctx, Sym v) : ctx_(std::move(ctx)), v_(v) {
    if (ctx_->w() < 32 && (v >> ctx_->w())) throw RangeError("value wider than field");
  }
  FieldElement(FieldRef ctx, const BitString& bits) : FieldElement(ctx, Sym(bits.to_uint())) {
    if (bits.size() != ctx_->w()) throw LengthMismatch("element bits must equal field width");
  }

  const FieldRef& ctx() const { return ctx_; }
  Sym value() const { return v_; }
  BitString bits() const { return BitString::from_uint(v_, ctx_->w()); }
  bool is_zero() const { return v_ == 0; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return *a.ctx_ == *b.ctx_ && a.v_ == b.v_;
  }

 private:
  FieldRef ctx_;
  Sym v_;
};

inline void require_same_ctx(const FieldElement& a, const FieldElement& b) {
  if (!(*a.ctx() == *b.ctx())) throw CtxMismatch("operands from different fields");
}

inline FieldElement fadd(const FieldElement& a, const FieldElement& b) {
  require_same_ctx(a, b);
  return {a.ctx(), a.value() ^ b.value()};
}
inline FieldElement fmul(const FieldElement& a, const FieldElement& b) {
  require_same_ctx(a, b);
  return {a.ctx(), a.ctx()->mul(a.value(), b.value())};
}
inline FieldElement finv(const FieldElement& a) { return {a.ctx(), a.ctx()->inv(a.value())}; }

// Dense matrix of field values under one context.
struct Matrix {
  FieldRef ctx;
  std::size_t rows = 0, cols = 0;
  std::vector<Sym> a;

  Matrix(FieldRef c, std::size_t r, std::size_t k) : ctx(std::move(c)), rows(r), cols(k), a(r * k, 0) {}
  Sym& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Sym at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct LinearSystem {
  Matrix A;
  std::vector<Sym> b;

  LinearSystem(Matrix m, std::vector<Sym> rhs) : A(std::move(m)), b(std::move(rhs)) {
    if (A.rows != b.size()) throw LengthMismatch("row count differs from right-hand side length");
  }
  static LinearSystem from_elements(const std::vector<std::vector<FieldElement>>& rows,
                                    const std::vector<FieldElement>& rhs, FieldRef ctx) {
    std::size_t k = rows.empty() ? 0 : rows[0].size();
    Matrix m(ctx, rows.size(), k);
    std::vector<Sym> b;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != k) throw LengthMismatch("ragged matrix");
      for (std::size_t j = 0; j < k; ++j) {
        if (!(*rows[i][j].ctx() == *ctx)) throw CtxMismatch("matrix entry from another field");
        m.at(i, j) = rows[i][j].value();
      }
    }
    for (auto& e : rhs) {
      if (!(*e.ctx() == *ctx)) throw CtxMismatch("rhs entry from another field");
      b.push_back(e.value());
    }
    return LinearSystem(std::move(m), std::move(b));
  }
};

// Row echelon form in place with first-nonzero pivots; returns pivot columns.
// `rhs` (may be null) is transformed alongside.
inline std::vector<std::size_t> row_reduce(Matrix& m, std::vector<Sym>* rhs) {
  const FieldCtx& f = *m.ctx;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && m.at(p, c) == 0) ++p;
    if (p == m.rows) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
      if (rhs) std::swap((*rhs)[p], (*rhs)[r]);
    }
    Sym iv = f.inv(m.at(r, c));
    for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = f.mul(m.at(r, j), iv);
    if (rhs) (*rhs)[r] = f.mul((*rhs)[r], iv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Sym fac = m.at(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) ^= f.mul(fac, m.at(r, j));
      if (rhs) (*rhs)[i] ^= f.mul(fac, (*rhs)[r]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix m) { return row_reduce(m, nullptr).size(); }

struct AffineSolution {
  std::vector<Sym> x;
  std::size_t kernel_dim = 0;  // over GF(2^w); solution set has (2^w)^kernel_dim points
};

// Uniform sample from {x : A x = b}: free variables drawn uniformly, pivots
// back-substituted from the reduced form.
inline AffineSolution solve_affine_uniform(const LinearSystem& sys, Rng& rng) {
  Matrix m = sys.A;
  std::vector<Sym> b = sys.b;
  auto piv = row_reduce(m, &b);
  for (std::size_t i = piv.size(); i < m.rows; ++i)
    if (b[i] != 0) throw Inconsistent("rank(A) < rank([A|b])");
  const FieldCtx& f = *m.ctx;
  std::vector<bool> is_piv(m.cols, false);
  for (auto c : piv) is_piv[c] = true;
  AffineSolution s;
  s.x.assign(m.cols, 0);
  for (std::size_t j = 0; j < m.cols; ++j)
    if (!is_piv[j]) s.x[j] = Sym(rng.below(f.order()));
  s.kernel_dim = m.cols - piv.size();
  // Reduced echelon: pivot row i reads x[piv[i]] + sum_{free j} m[i][j] x[j] = b[i].
  for (std::size_t i = 0; i < piv.size(); ++i) {
    Sym v = b[i];
    for (std::size_t j = piv[i] + 1; j < m.cols; ++j)
      if (!is_piv[j] && m.at(i, j)) v ^= f.mul(m.at(i, j), s.x[j]);
    s.x[piv[i]] = v;
  }
  return s;
}

inline Matrix vandermonde(const FieldRef& ctx, const std::vector<Sym>& points, std::size_t degree) {
  if (degree + 1 < points.size())
    throw RangeError("degree " + std::to_string(degree) + " too small for " + std::to_string(points.size()) + " points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw DuplicatePoint("point " + std::to_string(points[i]) + " repeated");
  Matrix m(ctx, points.size(), degree + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Sym p = 1;
    for (std::size_t j = 0; j <= degree; ++j) {
      m.at(i, j) = p;
      p = ctx->mul(p, points[i]);
    }
  }
  return m;
}

inline Matrix vandermonde(const FieldRef& ctx, const std::vector<FieldElement>& points, std::size_t degree) {
  std::vector<Sym> v;
  for (auto& p : points) {
    if (!(*p.ctx() == *ctx)) throw CtxMismatch("point from another field");
    v.push_back(p.value());
  }
  return vandermonde(ctx, v, degree);
}

}  // namespace exforge
