// exforge: plan | encode | decode | extract | verify

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

#include "exforge/verify.hpp"

using namespace exforge;

namespace {

constexpr int kInfeasible = 2;
constexpr int kFormat = 3;
constexpr int kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ParamPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read plan file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("plan file is not JSON: ") + e.what());
  }
  return plan_from_json(j);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  f << text << "\n";
}

// "0x..." is hex, anything else a 0/1 string; either must give exactly len bits.
BitString parse_bits(const std::string& s, std::size_t len, const std::string& what) {
  BitString b = s.rfind("0x", 0) == 0 ? BitString::from_hex(s, len) : BitString::from_string(s);
  if (b.size() != len) throw LengthMismatch(what + " has " + std::to_string(b.size()) + " bits, plan needs " + std::to_string(len));
  return b;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exforge: non-malleable extractors and split-state codes"};
  app.require_subcommand(1);

  std::string plan_path, out, profile = "two-source-nm", scale = "asymptotic", eps_s = "2^-20";
  std::uint64_t seed = 0, budget = std::uint64_t(1) << 26;
  std::size_t n = std::size_t(1) << 30, k = 0;
  double threshold = -1;

  auto* plan = app.add_subcommand("plan", "choose parameters and print the plan as JSON");
  plan->add_option("--profile", profile, "seeded-nm | two-source-nm | multi")->capture_default_str();
  plan->add_option("--scale", scale, "asymptotic (ledger enforced) | toy (smallest runnable)")->capture_default_str();
  plan->add_option("--n", n, "source length")->capture_default_str();
  plan->add_option("--k", k, "min-entropy (default n)");
  plan->add_option("--eps", eps_s, "error: p/q, 2^-k or a decimal")->capture_default_str();
  plan->add_option("--out", out, "write here instead of stdout");

  std::string message;
  auto* enc = app.add_subcommand("encode", "encode a message into a codeword file");
  enc->add_option("--plan", plan_path, "toy two-source-nm plan")->required();
  enc->add_option("--seed", seed, "encoder randomness")->capture_default_str();
  enc->add_option("--out", out, "codeword file")->required();
  enc->add_option("message", message, "message bits, 0/1 string or 0x hex")->required();

  std::string file;
  auto* dec = app.add_subcommand("decode", "decode a codeword file");
  dec->add_option("--plan", plan_path, "plan used to encode")->required();
  dec->add_option("--out", out, "write the message here");
  dec->add_option("file", file, "codeword file")->required();

  std::string xs, ys;
  auto* ext = app.add_subcommand("extract", "evaluate the plan's extractor on given inputs");
  ext->add_option("--plan", plan_path, "toy plan of any profile")->required();
  ext->add_option("--out", out, "write the output here");
  ext->add_option("x", xs, "source, 0/1 string or 0x hex")->required();
  ext->add_option("y", ys, "second source or seed")->required();

  std::string suite;
  bool list = false;
  auto* ver = app.add_subcommand("verify", "run a verification suite, print a JSON report");
  ver->add_option("suite", suite, "suite name");
  ver->add_flag("--list", list, "list suites");
  ver->add_option("--budget", budget, "largest enumeration a check may run; 0 runs nothing")->capture_default_str();
  ver->add_option("--threshold", threshold, "replace the regression pins");
  ver->add_option("--out", out, "write the report here");
  ver->add_option("--seed", seed, "unused: suites are seeded internally");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*plan) {
      ParamPlan p;
      if (scale == "toy") {
        p = toy_plan(profile);
      } else if (scale == "asymptotic") {
        p = plan_params(n, k ? k : n, parse_rational(eps_s), profile);
      } else {
        throw UsageError("scale must be toy or asymptotic");
      }
      emit(to_json(p).dump(2), out);
      if (p.scale == "toy" && !p.ledger_holds())
        std::cerr << "note: toy plan is runnable but fails " << first_failure(p.ledger)->text << "\n";
      return 0;
    }

    if (*enc) {
      ParamPlan p = load_plan(plan_path);
      CodecCfg cc{nm2_from_plan(p)};
      Rng rng(seed);
      Codeword cw = encode(cc, parse_bits(message, cc.m(), "message"), rng);
      auto bytes = write_codeword(cw, plan_hash(p));
      std::ofstream f(out, std::ios::binary);
      if (!f) throw UsageError("cannot write " + out);
      f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
      return 0;
    }

    if (*dec) {
      ParamPlan p = load_plan(plan_path);
      CodecCfg cc{nm2_from_plan(p)};
      CodewordFile f = read_codeword(read_bytes(file));
      if (f.plan_hash != plan_hash(p)) throw FormatError("codeword was written under a different plan");
      if (f.n != cc.n()) throw FormatError("codeword halves differ from the plan's n");
      emit(decode(cc, f.cw).to_string(), out);
      return 0;
    }

    if (*ext) {
      ParamPlan p = load_plan(plan_path);
      BitString w;
      if (p.profile == "two-source-nm") {
        auto c = nm2_from_plan(p);
        w = nm2_extract(c, parse_bits(xs, c.n, "x"), parse_bits(ys, c.n, "y"));
      } else if (p.profile == "seeded-nm") {
        auto c = snm_from_plan(p);
        w = snm_extract(c, parse_bits(xs, c.n, "x"), parse_bits(ys, c.d, "seed"));
      } else {
        auto [c, plug] = tnm_from_plan(p);
        if (c.s != 1) throw UsageError("extract takes one source; the plan has " + std::to_string(c.s));
        w = seeded_tnm_extract(c, plug, {parse_bits(xs, c.n, "x")}, parse_bits(ys, c.d, "seed"));
      }
      emit(w.to_string(), out);
      return 0;
    }

    if (*ver) {
      if (list) {
        for (auto& s : suite_names()) std::cout << s << "\n";
        return 0;
      }
      bool known = false;
      for (auto& s : suite_names()) known |= s == suite;
      if (!known) {
        std::cerr << "unknown suite '" << suite << "'; try --list\n";
        return kUsage;
      }
      VerifyOptions opt;
      opt.budget = budget;
      if (threshold >= 0) opt.threshold = threshold;
      SuiteReport r = run_suite(suite, opt);
      for (auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      emit(to_json(r).dump(2), out);
      return r.pass() ? 0 : 1;
    }
  } catch (const Infeasible& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kFormat;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
