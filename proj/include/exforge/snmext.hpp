#pragma once

// Advice generator and the seeded non-malleable extractor built on AdvCB.

#include <cmath>
#include <string>
#include <vector>

#include "exforge/breaker.hpp"
#include "exforge/rs.hpp"

namespace exforge {

// Y_1, Z-bar_1 and Y_2 widths; usable on its own for collision audits.
struct AdvGenCfg {
  std::size_t n = 0, k = 0, d = 0;
  std::size_t d1 = 0;     // Y_1 = prefix of y
  std::size_t count = 0;  // RS symbols sampled for Y_2
  std::size_t d2 = 0;     // Z-bar_1 = prefix of Z, count*w bits
  std::size_t d3 = 0;     // |Y_2| after truncation
  RSCode rs;              // y as ceil(d/w) symbols over GF(2^w), w = ceil(log2 d)
  SeededExtCfg ext_z;     // Ext'(x, Y_1) -> d bits

  std::size_t a() const { return d1 + d3; }

  static AdvGenCfg make(std::size_t n, std::size_t k, std::size_t d, std::size_t d1, std::size_t count,
                        std::size_t d3 = 0) {
    AdvGenCfg c;
    c.n = n;
    c.k = k;
    c.d = d;
    c.d1 = d1;
    c.count = count;
    if (d < 2) throw PlanViolation("seed must have at least 2 bits");
    unsigned w = unsigned(std::bit_width(d - 1));
    c.rs = RSCode(w, (d + w - 1) / w, std::size_t(1) << w);
    c.d2 = count * w;
    c.d3 = d3 ? d3 : c.d2;
    if (d1 < 1 || d1 > d) throw PlanViolation("Y_1 must be a non-empty slice of the seed");
    if (count < 1 || count > c.rs.n) throw PlanViolation("symbol count outside the codeword");
    if (c.d2 > d) throw PlanViolation("Z-bar_1 needs " + std::to_string(c.d2) + " bits of a " + std::to_string(d) + "-bit Z");
    if (c.d3 > c.d2) throw PlanViolation("Y_2 cannot exceed the sampled symbols");
    c.ext_z = SeededExtCfg::lhl(n, d1, d, k);
    return c;
  }

  // Pr[alpha = alpha'] when Y_1 agrees, Z-bar_1 is uniform and y != y':
  // every sampled symbol lands where the two codewords agree (at most n0 - 1 places).
  Rational sampling_miss_bound() const {
    Rational p = 1;
    for (std::size_t i = 0; i < count; ++i) {
      long agree = long(rs.n0) - 1 - long(i);
      if (agree <= 0) return 0;
      p *= Rational(agree, long(rs.n) - long(i));
    }
    return p;
  }
};

struct SnmCfg {
  std::size_t n = 0, k = 0, d = 0;
  Rational eps{1, 4};
  double C = 2;
  AdvGenCfg gen;
  AdvCBCfg adv;
  SeededExtCfg ext_out;  // Ext(x, V) -> floor(k/4) bits

  Rational eps_prime() const { return eps / 10; }
  std::size_t out() const { return k / 4; }

  static SnmCfg make(std::size_t n, std::size_t k, std::size_t d, std::size_t d1, std::size_t count,
                     std::size_t d3 = 0, Rational eps = Rational(1, 4)) {
    SnmCfg c;
    c.n = n;
    c.k = k;
    c.d = d;
    c.eps = eps;
    if (c.out() < 1) throw PlanViolation("output floor(k/4) is empty for k = " + std::to_string(k));
    c.gen = AdvGenCfg::make(n, k, d, d1, count, d3);
    c.adv = AdvCBCfg::toy(d, c.gen.a());
    c.ext_out = SeededExtCfg::lhl(n, c.adv.out, c.out(), k);
    return c;
  }

  std::vector<Inequality> ledger() const {
    double ep = to_double(eps_prime()), A = double(adv.a_pad);
    return {
        {"k >= 6d", double(k), 6.0 * double(d)},
        {"d >= C log(n/eps')", double(d), C * std::log2(double(n) / ep)},
        {"d >= C log a log(da/eps')", double(d), C * std::max(1.0, std::log2(A)) * std::log2(double(d) * A / ep)},
    };
  }
};

// g(y, z): the z-selected RS symbols of y, truncated to d3 bits.
inline BitString advice_g(const AdvGenCfg& c, const BitString& y, const BitString& zbar) {
  return sample_rs_symbols(c.rs, to_symbols(y, c.rs.w()), zbar, c.count).slice(0, c.d3);
}

struct Advice {
  BitString alpha, z;
};

inline Advice adv_gen(const AdvGenCfg& c, const BitString& x, const BitString& y) {
  if (x.size() != c.n || y.size() != c.d)
    throw LengthMismatch("advice inputs of " + std::to_string(x.size()) + " and " + std::to_string(y.size()) + " bits");
  BitString y1 = y.slice(0, c.d1);
  BitString z = lhl_extract(c.ext_z, x, y1);
  return {y1.concat(advice_g(c, y, z.slice(0, c.d2))), z};
}

inline BitString snm_extract(const SnmCfg& c, const BitString& x, const BitString& y) {
  auto [alpha, z] = adv_gen(c.gen, x, y);
  BitString v = adv_cb(c.adv, y, z, alpha);
  return lhl_extract(c.ext_out, x, v);
}

}  // namespace exforge
