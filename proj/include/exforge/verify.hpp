#pragma once

// Named verification suites shared by the CLI and the acceptance binary.
// Each check records its measured value, exactly where the value is a
// fraction, next to the bound it is held to.

#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exforge/distrib.hpp"
#include "exforge/multi.hpp"
#include "exforge/nmcode.hpp"
#include "exforge/plan.hpp"
#include "exforge/snmext.hpp"

namespace exforge {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string value;      // exact fraction when there is one
  double value_f = 0;
  std::string bound;      // what the value is held to
  double bound_f = 0;
  std::string detail;
  double seconds = 0;
  std::uint64_t cost = 0;  // largest single enumeration or draw count
};

struct SuiteReport {
  std::string suite;
  std::uint64_t budget = 0;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  // Skipped checks are listed in warnings, not counted as passes or failures.
  bool pass() const {
    for (auto& c : checks)
      if (!c.skipped && !c.pass) return false;
    return true;
  }
  double seconds() const {
    double s = 0;
    for (auto& c : checks) s += c.seconds;
    return s;
  }
};

struct VerifyOptions {
  std::uint64_t budget = std::uint64_t(1) << 26;
  std::optional<double> threshold;  // replaces the regression pins
};

namespace verify_detail {

inline void run_check(SuiteReport& rep, const VerifyOptions& opt, const std::string& name, std::uint64_t cost,
                      const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  r.cost = cost;
  if (cost > opt.budget) {
    r.skipped = true;
    r.detail = "cost " + std::to_string(cost) + " exceeds budget " + std::to_string(opt.budget);
    rep.warnings.push_back("skipped " + name + ": " + r.detail);
    rep.checks.push_back(r);
    return;
  }
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("threw: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.checks.push_back(r);
}

inline void set_exact(CheckResult& r, const Rational& v) {
  r.value = to_fraction(v);
  r.value_f = to_double(v);
}

inline std::string pow2_str(std::size_t e) { return "2^" + std::to_string(e); }

}  // namespace verify_detail

// ------------------------------------------------------------------ IExt

inline void suite_iext_fiber(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  // n = 20, d = 10: 3 output bits, so a full-rank map has fibers of 2^17.
  run_check(rep, opt, "rank n=20 d=10, all 1024 seeds", 1024, [](CheckResult& r) {
    auto c = IExtCfg::make(20, 10);
    std::size_t lo = 64, hi = 0;
    for (std::uint64_t s = 0; s < 1024; ++s) {
      std::size_t rk = gf2_rank(iext_matrix(c, BitString::from_uint(s, 10)));
      lo = std::min(lo, rk);
      hi = std::max(hi, rk);
    }
    r.value = "fiber 2^" + std::to_string(20 - hi) + (lo == hi ? "" : "..2^" + std::to_string(20 - lo));
    r.value_f = double(20 - lo);
    r.bound = "2^17 for every seed";
    r.bound_f = 17;
    r.pass = lo == c.out && hi == c.out;
    r.detail = "rank " + std::to_string(lo) + ".." + std::to_string(hi) + " of " + std::to_string(c.out);
  });
  run_check(rep, opt, "enumeration n=14 d=10, all 1024 seeds", std::uint64_t(1) << 14, [](CheckResult& r) {
    auto c = IExtCfg::make(14, 10);
    std::uint64_t lo = ~0ull, hi = 0;
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < 1024; ++s) {
      BitString rs = BitString::from_uint(s, 10);
      std::vector<std::uint64_t> count(std::size_t(1) << c.out, 0);
      for (std::uint64_t x = 0; x < (1u << 14); ++x) count[iext_extract(c, BitString::from_uint(x, 14), rs).to_uint()]++;
      for (auto k : count) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
        bad += k != (1u << 11);
      }
    }
    r.value = std::to_string(lo) + ".." + std::to_string(hi);
    r.value_f = double(hi);
    r.bound = "2^11 = 2048 for every (seed, output)";
    r.bound_f = 2048;
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " fibers off size";
  });
}

inline void suite_iext_linearity(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  run_check(rep, opt, "basis superposition n=20 d=10, 100 seeds", 100 * 41, [](CheckResult& r) {
    auto c = IExtCfg::make(20, 10);
    Rng rng(0x1e7);
    std::size_t bad = 0, total = 0;
    for (int t = 0; t < 100; ++t) {
      BitString seed = rng.bits(10);
      std::vector<BitString> img;
      for (std::size_t j = 0; j < 20; ++j) {
        BitString e(20);
        e.set(j, true);
        img.push_back(iext_extract(c, e, seed));
      }
      bad += !iext_extract(c, BitString(20), seed).is_zero();
      ++total;
      for (int k = 0; k < 20; ++k) {
        BitString x = rng.bits(20), want(c.out);
        for (std::size_t j = 0; j < 20; ++j)
          if (x.get(j)) want ^= img[j];
        bad += iext_extract(c, x, seed) != want;
        ++total;
      }
    }
    r.value = std::to_string(bad) + "/" + std::to_string(total);
    r.value_f = double(bad);
    r.bound = "0 failures";
    r.pass = bad == 0;
  });
}

// ------------------------------------------------------------------ codec

inline void suite_codec_roundtrip(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  const std::size_t per = 1000;
  run_check(rep, opt, "decode(encode(s)) = s, all messages x 1000", per, [&](CheckResult& r) {
    CodecCfg cc{smallest_nm2()};
    Rng rng(0xc0dec);
    std::size_t bad = 0, total = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << cc.m()); ++s) {
      BitString msg = BitString::from_uint(s, cc.m());
      for (std::size_t t = 0; t < per; ++t) {
        bad += decode(cc, encode(cc, msg, rng)) != msg;
        ++total;
      }
    }
    r.value = std::to_string(bad) + "/" + std::to_string(total);
    r.value_f = double(bad);
    r.bound = "0 failures";
    r.pass = bad == 0;
    r.detail = "n = " + std::to_string(cc.n()) + ", m = " + std::to_string(cc.m());
  });
}

// Conditional on the AdvCB output V, a uniform element of the decoding fiber
// has: the X_4 bits uniform (free coefficients of the left system), the Y_5
// bits of coefficient 1 uniform (free in the right system), and Y_4 uniform
// on the affine IExt fiber. The cell law is therefore computable exactly from
// the IExt matrix for V, and Pearson's statistic against it, with the
// expected counts summed draw by draw, tests the encoder.
using EncoderFn = std::function<Codeword(const CodecCfg&, const BitString&, Rng&, BitString*)>;

// `enc` replaces the shipped encoder, so tests can check the suite rejects a biased one.
inline void suite_encoder_uniformity(SuiteReport& rep, const VerifyOptions& opt, std::size_t draws = 100000,
                                     EncoderFn enc = nullptr) {
  using namespace verify_detail;
  if (!enc) enc = [](const CodecCfg& c, const BitString& m, Rng& rng, BitString* v) { return encode(c, m, rng, v); };
  CodecCfg cc{smallest_nm2()};
  const Nm2Cfg& c = cc.nm2;

  run_check(rep, opt, "fiber size is message independent", std::uint64_t(1) << c.adv.out, [&](CheckResult& r) {
    std::size_t low_rank = 0;
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << c.adv.out); ++v)
      low_rank += gf2_rank(iext_matrix(c.iext, BitString::from_uint(v, c.adv.out))) != c.iext.out;
    std::size_t bad_pos = 0;
    for (std::size_t p = 0; p < c.rs.n; ++p)
      for (std::size_t vars : {c.t5(), c.t4() + c.t5()})
        bad_pos += rank(vandermonde(c.rs.field, std::vector<Sym>{Sym(p)}, vars - 1)) != c.count;
    // free bits given the conditioning tuple, plus the tuple itself
    std::size_t tuple = 2 * c.n1 + 2 * c.n3 + 2 * c.count * c.w;
    std::size_t free = (c.n4 - c.iext.out) + c.w * (c.t5() - c.count) + c.w * (c.t4() + c.t5() - c.count);
    r.value = pow2_str(tuple + free);
    r.value_f = double(tuple + free);
    r.bound = pow2_str(2 * c.n - c.out()) + " for every message";
    r.bound_f = double(2 * c.n - c.out());
    r.pass = low_rank == 0 && bad_pos == 0 && tuple + free == 2 * c.n - c.out();
    r.detail = std::to_string(low_rank) + " rank-deficient IExt seeds, " + std::to_string(bad_pos) + " singular sampling systems";
  });

  const std::size_t n4 = c.n4, dv = c.adv.out, mbits = c.out();
  const std::size_t y4_at = c.n1 + c.n3, x4_at = c.n1 + c.n3, y5_at = c.n1 + c.n3 + c.n4;
  const std::size_t win[4] = {1, 4, 9, 14};     // inside Y_4
  const std::size_t xb[2] = {x4_at, x4_at + 11}; // inside X_4
  const std::size_t yb[2] = {y5_at + 1, y5_at + 6};  // Y_5 bits of coefficient 1
  if (n4 < 15 || c.n5 < 2 * c.w || c.w < 7) {
    rep.warnings.push_back("encoder cell layout needs the smallest two-source plan");
    return;
  }

  // law[v][msg][window] = #{y4 in the fiber of msg under seed v with that window}
  std::vector<std::uint32_t> law;
  auto build = [&]() {
    law.assign((std::size_t(1) << dv) << mbits << 4, 0);
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << dv); ++v) {
      auto rows = iext_matrix(c.iext, BitString::from_uint(v, dv));
      std::vector<std::uint64_t> mask;
      for (auto& row : rows) mask.push_back(row.to_uint());
      for (std::uint64_t y = 0; y < (std::uint64_t(1) << n4); ++y) {
        std::uint64_t s = 0;
        for (auto m : mask) s = (s << 1) | std::uint64_t(std::popcount(m & y) & 1);
        std::uint64_t w = 0;
        for (auto j : win) w = (w << 1) | ((y >> (n4 - 1 - j)) & 1);
        law[(((v << mbits) | s) << 4) | w]++;
      }
    }
  };
  const double fiber = double(std::uint64_t(1) << (n4 - mbits));

  for (std::uint64_t s = 0; s < (std::uint64_t(1) << mbits); ++s) {
    BitString msg = BitString::from_uint(s, mbits);
    run_check(rep, opt, "chi-square vs exact conditional law, message " + msg.to_string(), draws, [&](CheckResult& r) {
      if (law.empty()) build();
      Rng rng(0xe4c0de + s);
      std::vector<double> obs(256, 0), expct(256, 0);
      BitString v;
      for (std::size_t t = 0; t < draws; ++t) {
        Codeword cw = enc(cc, msg, rng, &v);
        std::size_t cell = 0;
        for (auto b : xb) cell = (cell << 1) | std::size_t(cw.left.get(b));
        for (auto b : yb) cell = (cell << 1) | std::size_t(cw.right.get(b));
        for (auto j : win) cell = (cell << 1) | std::size_t(cw.right.get(y4_at + j));
        obs[cell] += 1;
        const std::uint32_t* lw = &law[((v.to_uint() << mbits) | s) << 4];
        for (std::size_t hi = 0; hi < 16; ++hi)
          for (std::size_t w = 0; w < 16; ++w) expct[(hi << 4) | w] += double(lw[w]) / fiber / 16.0;
      }
      double stat = 0;
      std::size_t cells = 0, impossible = 0;
      for (std::size_t i = 0; i < 256; ++i) {
        if (expct[i] < 1e-9) {
          impossible += obs[i] > 0;
          continue;
        }
        ++cells;
        stat += (obs[i] - expct[i]) * (obs[i] - expct[i]) / expct[i];
      }
      boost::math::chi_squared dist(double(cells - 1));
      double p = boost::math::cdf(boost::math::complement(dist, stat));
      r.value = std::to_string(p);
      r.value_f = p;
      r.bound = "p > 0.01";
      r.bound_f = 0.01;
      r.pass = p > 0.01 && impossible == 0;
      r.detail = "chi2 = " + std::to_string(stat) + " on " + std::to_string(cells - 1) + " dof, " +
                 std::to_string(draws) + " draws" + (impossible ? ", impossible cells hit" : "");
    });
  }
}

// ------------------------------------------------------------ extractors

inline void suite_ip_strongness(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  auto c = IPCfg::make(12, 2);
  ErrorBound bound = ErrorBound::sqrt_of(c.error_bound_sq(10, 10));
  // The sample is drawn once, so both sides see the same 50 source pairs.
  Rng rng(0x1b);
  std::vector<std::pair<FlatSource, FlatSource>> pairs;
  for (int t = 0; t < 50; ++t) {
    FlatSource a = FlatSource::random(12, 10, rng);
    pairs.emplace_back(a, FlatSource::random(12, 10, rng));
  }
  for (std::size_t side : {0u, 1u}) {
    run_check(rep, opt, std::string("n=12 m=2, 50 flat (12,10) pairs, strong in ") + (side ? "y" : "x"),
              std::uint64_t(1) << 20, [&](CheckResult& r) {
                Rational worst = 0;
                for (auto& [x, y] : pairs) {
                  EvalSpec spec;
                  spec.sources = {x, y};
                  spec.sides = {side};
                  auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return ip_extract(c, v[0], v[1]); }, spec);
                  worst = std::max(worst, distance_from_uniform_prefix(j, 2));
                }
                set_exact(r, worst);
                r.bound = bound.describe();
                r.bound_f = bound.to_double();
                r.pass = bound.admits(worst);
                r.detail = "worst of 50";
              });
  }
}

inline void suite_lhl_strongness(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  run_check(rep, opt, "n=12 k=8 m=4 d=8, 50 flat sources, strong in the seed", std::uint64_t(1) << 16, [](CheckResult& r) {
    auto c = SeededExtCfg::lhl(12, 8, 4, 8);
    Rng rng(0x1b1);
    Rational worst = 0;
    for (int t = 0; t < 50; ++t) {
      EvalSpec spec;
      spec.sources = {FlatSource::random(12, 8, rng), FlatSource::uniform(8)};
      spec.sides = {1};
      auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return lhl_extract(c, v[0], v[1]); }, spec);
      worst = std::max(worst, distance_from_uniform_prefix(j, 4));
    }
    set_exact(r, worst);
    r.bound = c.eps_bound.describe();
    r.bound_f = c.eps_bound.to_double();
    r.pass = c.eps_bound.admits(worst) && c.eps_bound.admits(Rational(1, 8)) && !c.eps_bound.admits(Rational(1, 8) + Rational(1, 1000000));
    r.detail = "worst of 50; bound equals 1/8";
  });
}

// ---------------------------------------------------------------- algebra

inline void suite_rs_distance(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  run_check(rep, opt, "GF(2^3), n0 <= 3, n <= 7, all codeword pairs", 512 * 512, [](CheckResult& r) {
    std::size_t cases = 0, bad = 0;
    std::string worst;
    for (std::size_t n0 = 1; n0 <= 3; ++n0)
      for (std::size_t n = n0; n <= 7; ++n) {
        RSCode c(3, n0, n);
        std::vector<std::vector<Sym>> words;
        std::size_t total = std::size_t(1) << (3 * n0);
        for (std::size_t v = 0; v < total; ++v) {
          std::vector<Sym> m(n0);
          for (std::size_t j = 0; j < n0; ++j) m[j] = Sym((v >> (3 * j)) & 7);
          words.push_back(rs_encode(c, m));
        }
        std::size_t best = n + 1;
        for (std::size_t i = 0; i < words.size(); ++i)
          for (std::size_t j = i + 1; j < words.size(); ++j) {
            std::size_t dist = 0;
            for (std::size_t p = 0; p < n; ++p) dist += words[i][p] != words[j][p];
            best = std::min(best, dist);
          }
        ++cases;
        if (best < n - n0 + 1) {
          ++bad;
          worst += " (" + std::to_string(n0) + "," + std::to_string(n) + ")";
        }
      }
    r.value = std::to_string(bad) + "/" + std::to_string(cases) + " codes below n-n0+1";
    r.value_f = double(bad);
    r.bound = "min distance >= n - n0 + 1";
    r.pass = bad == 0;
    r.detail = worst;
  });
}

inline void suite_vandermonde_rank(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  run_check(rep, opt, "GF(2^3), all 255 point subsets, degree |S|-1..7", 255 * 8, [](CheckResult& r) {
    auto f = FieldCtx::canonical(3);
    std::size_t cases = 0, bad = 0;
    for (unsigned mask = 1; mask < 256; ++mask) {
      std::vector<Sym> pts;
      for (Sym p = 0; p < 8; ++p)
        if ((mask >> p) & 1) pts.push_back(p);
      for (std::size_t t = pts.size() - 1; t <= 7; ++t) {
        ++cases;
        bad += rank(vandermonde(f, pts, t)) != pts.size();
      }
    }
    r.value = std::to_string(bad) + "/" + std::to_string(cases);
    r.value_f = double(bad);
    r.bound = "rank = #points";
    r.pass = bad == 0;
  });
}

inline void suite_output_lengths(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  auto tally = [](CheckResult& r, std::size_t bad, std::size_t cases, const std::string& what) {
    r.value = std::to_string(bad) + "/" + std::to_string(cases) + " mismatches";
    r.value_f = double(bad);
    r.bound = what;
    r.pass = bad == 0 && cases > 0;
  };
  run_check(rep, opt, "merger m1 = floor(0.2m)", 200, [&](CheckResult& r) {
    std::size_t bad = 0, cases = 0;
    Rng rng(1);
    for (std::size_t m = 5; m <= 200; ++m) {
      auto c = NipmCfg::make(2, m, 3 * m);
      ++cases;
      std::vector<BitString> rows{rng.bits(m), rng.bits(m)};
      std::size_t got = nipm(c, rows, rng.bits(3 * m)).size();
      bad += c.m1() != m / 5 || got != m / 5;
    }
    tally(r, bad, cases, "floor(0.2m), m = 5..200");
  });
  run_check(rep, opt, "flip-flop floor(0.4k)", 200, [&](CheckResult& r) {
    std::size_t bad = 0, cases = 0;
    Rng rng(2);
    for (std::size_t k = 3; k <= 120; ++k) {
      std::size_t n = 2 * k, d = 2 * k;
      auto c = FlipFlopCfg::make(n, d, k);
      ++cases;
      bad += c.out != 2 * k / 5 || flip_flop(c, rng.bits(n), rng.bits(d), k & 1).size() != 2 * k / 5;
    }
    tally(r, bad, cases, "floor(0.4k), k = 3..120");
  });
  run_check(rep, opt, "AdvCB floor(d/10)", 200, [&](CheckResult& r) {
    std::size_t bad = 0, cases = 0;
    Rng rng(3);
    for (std::size_t d = 50; d <= 400; d += 7) {
      for (std::size_t a : {1u, 5u, 17u}) {
        AdvCBCfg c;
        try {
          c = AdvCBCfg::toy(d, a);
        } catch (const PlanViolation&) {
          continue;
        }
        ++cases;
        bad += c.out != d / 10 || adv_cb(c, rng.bits(d), rng.bits(d), rng.bits(a)).size() != d / 10;
      }
    }
    tally(r, bad, cases, "floor(d/10), d = 50..400");
  });
  run_check(rep, opt, "seeded non-malleable floor(k/4)", 200, [&](CheckResult& r) {
    std::size_t bad = 0, cases = 0;
    Rng rng(4);
    for (std::size_t k = 4; k <= 20; ++k) {
      auto c = SnmCfg::make(20, k, 100, 8, 2);
      ++cases;
      bad += c.out() != k / 4 || snm_extract(c, rng.bits(20), rng.bits(100)).size() != k / 4;
    }
    tally(r, bad, cases, "floor(k/4), n = 20, k = 4..20");
  });
}

inline void suite_advgen_collision(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  // Collisions factor through the law of Z-bar_1 given Y_1, so the count over
  // all 2^16 x 2^12 pairs is exact.
  run_check(rep, opt, "n=16 d=12, every seed bit flip, all (x, y)", std::uint64_t(1) << 20, [](CheckResult& r) {
    auto c = AdvGenCfg::make(16, 16, 12, 4, 1);
    std::vector<std::vector<std::uint64_t>> zlaw(16, std::vector<std::uint64_t>(16, 0));
    for (std::uint64_t y1 = 0; y1 < 16; ++y1)
      for (std::uint64_t x = 0; x < (1u << 16); ++x)
        zlaw[y1][lhl_extract(c.ext_z, BitString::from_uint(x, 16), BitString::from_uint(y1, 4)).read_uint(0, 4)]++;
    Rational worst = 0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < 12; ++i) {
      std::uint64_t hits = 0;
      for (std::uint64_t yv = 0; yv < 4096; ++yv) {
        BitString y = BitString::from_uint(yv, 12), yt = y;
        yt.flip(i);
        if (yt.slice(0, 4) != y.slice(0, 4)) continue;  // Y_1 differs: the advice differs outright
        for (std::uint64_t z = 0; z < 16; ++z) {
          BitString zb = BitString::from_uint(z, 4);
          if (advice_g(c, y, zb) == advice_g(c, yt, zb)) hits += zlaw[yv >> 8][z];
        }
      }
      Rational rate(BigInt(hits), BigInt(std::uint64_t(1) << 28));
      if (rate > worst) {
        worst = rate;
        worst_i = i;
      }
    }
    Rational limit = 2 * c.sampling_miss_bound();
    set_exact(r, worst);
    r.bound = "2 x " + to_fraction(c.sampling_miss_bound());
    r.bound_f = to_double(limit);
    r.pass = worst <= limit;
    r.detail = "worst flip at seed bit " + std::to_string(worst_i);
  });
}

// ---------------------------------------------------------------- planner

struct ShippedPlan {
  std::size_t n, k;
  Rational eps;
  std::string profile;
};

inline std::vector<ShippedPlan> shipped_plans() {
  std::size_t n = std::size_t(1) << 30;
  return {{n, n, pow2(-20), "seeded-nm"}, {n, n, pow2(-20), "two-source-nm"}, {n, n, pow2(-20), "multi"}};
}

inline void suite_planner_ledger(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  for (auto& s : shipped_plans()) {
    run_check(rep, opt, "shipped " + s.profile + " n=2^30", 1, [&](CheckResult& r) {
      auto p = plan_params(s.n, s.k, s.eps, s.profile);
      std::size_t bad = 0;
      for (auto& i : p.ledger) bad += !i.holds();
      r.value = std::to_string(p.ledger.size() - bad) + "/" + std::to_string(p.ledger.size()) + " lines hold";
      r.value_f = double(bad);
      r.bound = "every line holds";
      r.pass = bad == 0 && !p.ledger.empty();
      if (auto f = first_failure(p.ledger)) r.detail = "fails " + f->text;
    });
  }
  struct Bad {
    std::string label;
    std::function<void()> run;
    std::string want;
  };
  const std::size_t N = std::size_t(1) << 30;
  PlanConstants wide;
  wide.alpha = 1.0 / 150;
  std::vector<Bad> bad = {
      {"two-source n=2^20", [] { plan_params(1 << 20, 1 << 20, pow2(-20), "two-source-nm"); }, "d >= 240(l+1)s"},
      {"two-source n=2^10", [] { plan_params(1 << 10, 1 << 10, pow2(-20), "two-source-nm"); }, "r >= log n"},
      {"seeded n=2^20", [] { plan_params(1 << 20, 1 << 20, pow2(-20), "seeded-nm"); }, "k >= 6d"},
      {"two-source k=n/2", [N] { plan_params(N, N / 2, pow2(-20), "two-source-nm"); }, "k >= (1-gamma)n"},
      {"two-source alpha=1/150", [N, wide] { plan_params(N, N, pow2(-20), "two-source-nm", wide); }, "alpha < beta/50"},
  };
  for (auto& b : bad) {
    run_check(rep, opt, "infeasible " + b.label, 1, [&](CheckResult& r) {
      std::string got = "(accepted)";
      try {
        b.run();
      } catch (const Infeasible& e) {
        got = e.inequality;
      }
      r.value = got;
      r.bound = "names " + b.want;
      r.pass = got == b.want;
    });
  }
}

// ------------------------------------------------------------- regression

// Pinned SDs at the current toy plans. A change that raises any of these is
// a regression; they are not error guarantees.
inline const std::map<std::string, double>& regression_pins() {
  static const std::map<std::string, double> pins = {
      {"snm seed flip0", 0.0962},
      {"snm seed flip5", 0.0966},
      {"snm seed flip50", 0.0959},
      {"snm seed flip99", 0.0963},
      {"snm seed complement", 0.0962},
      {"snm seed shift_flip", 0.0954},
      {"snm seed affine", 0.0980},
      {"snm seed perm", 0.0976},
      {"nm2 flip1/identity", 0.8535},
      {"nm2 flip40/identity", 0.1874},
      {"nm2 flip125/identity", 0.8655},
      {"nm2 flip145/identity", 0.8699},
      {"nm2 flip1/flip1", 0.8521},
      {"nm2 flip125/flip140", 0.8534},
      {"nm2 complement/complement", 0.1856},
      {"nm2 shift_flip/shift_flip", 0.1843},
      {"nm2 affine/affine", 0.1847},
      {"nm2 perm/perm", 0.8699},
      {"nm2 complement/const", 0.0655},
      {"multi iterated x1 flip3, then advice only", 0.8721},
      {"multi iterated x2 flip100, then advice only", 0.8720},
      {"multi iterated advice only, both rounds", 0.8734},
      {"multi iterated x1 complement, x2 affine", 0.8720},
      {"multi seeded seed flip0", 0.0982},
      {"multi seeded seed flip50", 0.0890},
      {"multi seeded seed flip200", 0.0909},
      {"multi seeded seed complement", 0.0929},
      {"multi seeded seed affine", 0.0857},
  };
  return pins;
}

namespace verify_detail {

struct Experiment {
  std::string name;
  std::uint64_t cost;
  std::function<Rational(bool control)> run;
};

// One check per experiment against its pin, then the worst case against the
// worst case of the advice-ignoring control.
inline void run_regression(SuiteReport& rep, const VerifyOptions& opt, const std::string& construction,
                           const std::vector<Experiment>& exps) {
  Rational worst_real = -1, worst_ctrl = -1;
  std::string worst_real_at, worst_ctrl_at;
  std::size_t ran = 0;
  for (auto& e : exps) {
    std::string name = construction + " " + e.name;
    run_check(rep, opt, name, e.cost, [&](CheckResult& r) {
      Rational real = e.run(false), ctrl = e.run(true);
      set_exact(r, real);
      auto pin = regression_pins().find(name);
      double th = opt.threshold ? *opt.threshold : pin != regression_pins().end() ? pin->second : 0.0;
      r.bound_f = th;
      r.bound = (opt.threshold ? "override " : pin != regression_pins().end() ? "pin " : "no pin ") + std::to_string(th);
      r.pass = r.value_f <= th;
      r.detail = "control " + std::to_string(to_double(ctrl)) + " (" + to_fraction(ctrl) + ")";
      if (real > worst_real) worst_real = real, worst_real_at = e.name;
      if (ctrl > worst_ctrl) worst_ctrl = ctrl, worst_ctrl_at = e.name;
      ++ran;
    });
  }
  if (!ran) return;
  run_check(rep, opt, construction + " beats its control", 0, [&](CheckResult& r) {
    set_exact(r, worst_real);
    r.bound = "< control worst " + std::to_string(to_double(worst_ctrl));
    r.bound_f = to_double(worst_ctrl);
    r.pass = worst_real < worst_ctrl;
    r.detail = "worst real at " + worst_real_at + ", worst control at " + worst_ctrl_at;
  });
}

inline const Tamperer& by_id(const std::vector<Tamperer>& lib, const std::string& id) {
  for (auto& t : lib)
    if (t.id == id) return t;
  throw RangeError("no tamperer '" + id + "' in the library");
}

}  // namespace verify_detail

// Seeded: (W, W', Y, Y') against (U, W', Y, Y') for seed tamperers.
inline void suite_snm_regression(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  auto plan = toy_plan("seeded-nm");
  auto real = snm_from_plan(plan), ctrl = real;
  ctrl.adv.ignore_advice = true;
  Rng rng(11);
  auto X = std::make_shared<FlatSource>(FlatSource::random(real.n, 12, rng));
  auto Y = std::make_shared<FlatSource>(FlatSource::random(real.d, 4, rng));
  auto lib = std::make_shared<std::vector<Tamperer>>(tamperer_library(real.d));
  std::vector<Experiment> exps;
  for (std::string id : {"flip0", "flip5", "flip50", "flip99", "complement", "shift_flip", "affine", "perm"}) {
    exps.push_back({"seed " + id, X->size() * Y->size(), [=](bool control) {
                      const SnmCfg& c = control ? ctrl : real;
                      EvalSpec spec;
                      spec.sources = {*X, *Y};
                      spec.rounds = {{nullptr, &by_id(*lib, id)}};
                      spec.sides = {1};
                      auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return snm_extract(c, v[0], v[1]); }, spec);
                      return distance_from_uniform_prefix(j, c.out());
                    }});
  }
  run_regression(rep, opt, "snm", exps);
}

// Two-source: (W, W', X, X') against (U, W', X, X') for pairs (f, g) with f
// fixed-point-free.
inline void suite_nm2_regression(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  auto real = nm2_from_plan(toy_plan("two-source-nm")), ctrl = real;
  ctrl.adv.ignore_advice = true;
  Rng rng(21);
  auto X = std::make_shared<FlatSource>(FlatSource::random(real.n, 6, rng));
  auto Y = std::make_shared<FlatSource>(FlatSource::random(real.n, 8, rng));
  auto lib = std::make_shared<std::vector<Tamperer>>(tamperer_library(real.n));
  lib->push_back(Tamperer::identity(real.n));
  std::vector<std::pair<std::string, std::string>> pairs = {
      {"flip1", "identity"},  {"flip40", "identity"},     {"flip125", "identity"},  {"flip145", "identity"},
      {"flip1", "flip1"},     {"flip125", "flip140"},     {"complement", "complement"}, {"shift_flip", "shift_flip"},
      {"affine", "affine"},   {"perm", "perm"},           {"complement", "const"},
  };
  std::vector<Experiment> exps;
  for (auto [f, g] : pairs) {
    exps.push_back({f + "/" + g, X->size() * Y->size(), [=](bool control) {
                      const Nm2Cfg& c = control ? ctrl : real;
                      EvalSpec spec;
                      spec.sources = {*X, *Y};
                      spec.rounds = {{&by_id(*lib, f), &by_id(*lib, g)}};
                      spec.sides = {0};
                      auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return nm2_extract(c, v[0], v[1]); }, spec);
                      return distance_from_uniform_prefix(j, c.out());
                    }});
  }
  run_regression(rep, opt, "nm2", exps);
}

// Multi: the iterated breaker with s = 2, t = 2 over the two-source plug-in,
// (Z, Z^1, Z^2, X_1) against (U, Z^1, Z^2, X_1) with every advice differing;
// then the seeded t-non-malleable extractor of the toy multi plan under seed
// tampering.
inline void suite_multi_regression(SuiteReport& rep, const VerifyOptions& opt) {
  using namespace verify_detail;
  auto nm = smallest_nm2(), nmc = nm;
  nmc.adv.ignore_advice = true;
  auto plug = nm2_plugin(nm), plugc = nm2_plugin(nmc);
  auto mc = MultiCfg::make(2, 2, 8, nm.n - 8, plug), mcc = MultiCfg::make(2, 2, 8, nm.n - 8, plugc);
  mcc.ignore_advice = true;
  Rng rng(31);
  auto X1 = std::make_shared<FlatSource>(FlatSource::random(mc.n, 6, rng));
  auto X2 = std::make_shared<FlatSource>(FlatSource::random(mc.n, 6, rng));
  auto lib = std::make_shared<std::vector<Tamperer>>(tamperer_library(mc.n));
  BitString a0 = BitString::from_string("00010111");
  auto swap_to = [a0](const std::string& to) {
    BitString b = BitString::from_string(to);
    return std::make_shared<Tamperer>("advice", 8, [a0, b](const BitString& s) { return s == a0 ? b : s; }, false);
  };
  struct Iter {
    std::string name, f1, f2, a1, a2;
  };
  std::vector<Iter> iters = {
      {"x1 flip3, then advice only", "flip3", "", "10010111", "00010110"},
      {"x2 flip100, then advice only", "", "flip100", "10010111", "00110111"},
      {"advice only, both rounds", "", "", "10010111", "00010110"},
      {"x1 complement, x2 affine", "complement", "affine", "11010111", "00011111"},
  };
  std::vector<Experiment> exps;
  for (auto it : iters) {
    auto t1 = swap_to(it.a1), t2 = swap_to(it.a2);
    exps.push_back({"iterated " + it.name, X1->size() * X2->size(), [=](bool control) {
                      const MultiCfg& c = control ? mcc : mc;
                      const SSourceNmExt& p = control ? plugc : plug;
                      const Tamperer* f1 = it.f1.empty() ? nullptr : &by_id(*lib, it.f1);
                      const Tamperer* f2 = it.f2.empty() ? nullptr : &by_id(*lib, it.f2);
                      EvalSpec spec;
                      spec.sources = {*X1, *X2, FlatSource(8, {a0})};
                      spec.rounds = {{f1, f2, t1.get()}, {nullptr, nullptr, t2.get()}};
                      spec.sides = {0};
                      auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return multi_adv_cb(c, p, {v[0], v[1]}, v[2]); }, spec);
                      return distance_from_uniform_prefix(j, c.m);
                    }});
  }

  auto [tc, tplug] = tnm_from_plan(toy_plan("multi"));
  auto tcc = TnmCfg::make(tc.s, tc.t, tc.n, tc.k, tc.d, tc.gen.d1, tc.gen.count, plugc);
  tcc.multi.ignore_advice = true;
  auto X = std::make_shared<FlatSource>(FlatSource::random(tc.n, 10, rng));
  auto Y = std::make_shared<FlatSource>(FlatSource::random(tc.d, 3, rng));
  auto ylib = std::make_shared<std::vector<Tamperer>>(tamperer_library(tc.d));
  for (std::string id : {"flip0", "flip50", "flip200", "complement", "affine"}) {
    exps.push_back({"seeded seed " + id, X->size() * Y->size(), [=](bool control) {
                      const TnmCfg& c = control ? tcc : tc;
                      const SSourceNmExt& p = control ? plugc : tplug;
                      EvalSpec spec;
                      spec.sources = {*X, *Y};
                      spec.rounds = {{nullptr, &by_id(*ylib, id)}};
                      spec.sides = {1};
                      auto j = eval_extractor_dist([&](const std::vector<BitString>& v) { return seeded_tnm_extract(c, p, {v[0]}, v[1]); }, spec);
                      return distance_from_uniform_prefix(j, c.out());
                    }});
  }
  run_regression(rep, opt, "multi", exps);
}

// ---------------------------------------------------------------- registry

using SuiteFn = std::function<void(SuiteReport&, const VerifyOptions&)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg = {
      {"iext-fiber", suite_iext_fiber},
      {"iext-linearity", suite_iext_linearity},
      {"codec-roundtrip", suite_codec_roundtrip},
      {"encoder-uniformity", [](SuiteReport& r, const VerifyOptions& o) { suite_encoder_uniformity(r, o); }},
      {"ip-strongness", suite_ip_strongness},
      {"lhl-strongness", suite_lhl_strongness},
      {"rs-distance", suite_rs_distance},
      {"vandermonde-rank", suite_vandermonde_rank},
      {"output-lengths", suite_output_lengths},
      {"advgen-collision", suite_advgen_collision},
      {"planner-ledger", suite_planner_ledger},
      {"snm-regression", suite_snm_regression},
      {"nm2-regression", suite_nm2_regression},
      {"multi-regression", suite_multi_regression},
      {"nm-regression",
       [](SuiteReport& r, const VerifyOptions& o) {
         suite_snm_regression(r, o);
         suite_nm2_regression(r, o);
         suite_multi_regression(r, o);
       }},
  };
  return reg;
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> v;
  for (auto& [n, f] : suite_registry()) v.push_back(n);
  return v;
}

// Unknown names throw RangeError; budget 0 runs nothing.
inline SuiteReport run_suite(const std::string& name, const VerifyOptions& opt = {}) {
  for (auto& [n, f] : suite_registry()) {
    if (n != name) continue;
    SuiteReport rep;
    rep.suite = name;
    rep.budget = opt.budget;
    if (opt.budget == 0) {
      rep.warnings.push_back("budget 0: no checks run");
      return rep;
    }
    f(rep, opt);
    return rep;
  }
  throw RangeError("unknown suite '" + name + "'");
}

inline nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["budget"] = r.budget;
  j["pass"] = r.pass();
  j["warnings"] = r.warnings;
  j["checks"] = nlohmann::json::array();
  for (auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"skipped", c.skipped},
                           {"value", c.value},
                           {"value_float", c.value_f},
                           {"bound", c.bound},
                           {"bound_float", c.bound_f},
                           {"detail", c.detail},
                           {"seconds", c.seconds},
                           {"cost", c.cost}});
  }
  return j;
}

}  // namespace exforge
