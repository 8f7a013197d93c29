#include "cli_app.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qs/conjecture.hpp"
#include "qs/descent.hpp"
#include "qs/ranges.hpp"
#include "qs/reduction.hpp"
#include "qs/report.hpp"
#include "qs/sieve.hpp"

namespace qs::cli {
namespace {

constexpr int kOk = 0;
constexpr int kAnomaly = 1;
constexpr int kUsage = 2;

struct Common {
  std::string out = "-";
  std::string cache_dir;
  unsigned jobs = 0;  // 0 = all hardware threads
  std::vector<std::string> expect;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Report path, or - for standard output")->capture_default_str();
  sub->add_option("--cache-dir", c.cache_dir,
                  "Factor-base cache directory (default: $QS_CACHE_DIR, else .qs-cache)");
  sub->add_option("--jobs", c.jobs, "Worker threads (0 = all hardware threads)");
  sub->add_option("--expect", c.expect,
                  "KEY=VALUE assertion against the final report (dotted path into the JSON); "
                  "any mismatch exits 1")
      ->allow_extra_args(false);
}

unsigned jobs_of(const Common& c) {
  if (c.jobs) return c.jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::filesystem::path cache_dir_of(const Common& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("QS_CACHE_DIR"); env && *env) return env;
  return ".qs-cache";
}

std::int64_t floor_mod_840(std::int64_t n) {
  std::int64_t r = n % 840;
  return r < 0 ? r + 840 : r;
}

// "linear:c1,c0" or "quad:c2,c1,c0", coefficients in decimal.
Poly parse_poly(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--poly must be linear:c1,c0 or quad:c2,c1,c0");
  const std::string kind = spec.substr(0, colon);
  std::vector<mpz_class> cs;
  std::size_t pos = colon + 1;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const std::string tok =
        spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      cs.emplace_back(tok);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("--poly coefficient is not an integer: " + tok);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (kind == "linear" && cs.size() == 2) return Poly{0, cs[0], cs[1]};
  if (kind == "quad" && cs.size() == 3) return Poly{cs[0], cs[1], cs[2]};
  throw std::invalid_argument("--poly must be linear:c1,c0 or quad:c2,c1,c0");
}

// Resolve a dotted path ("sieve_report.converged", "certificates.0.valid")
// against the report; array steps are decimal indices.
const nlohmann::json* resolve_path(const nlohmann::json& root, const std::string& key) {
  const nlohmann::json* node = &root;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string tok =
        key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (node->is_object() && node->contains(tok)) {
      node = &node->at(tok);
    } else if (node->is_array() && !tok.empty() &&
               std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
      const std::size_t idx = std::stoul(tok);
      if (idx >= node->size()) return nullptr;
      node = &node->at(idx);
    } else {
      return nullptr;
    }
    if (dot == std::string::npos) return node;
    pos = dot + 1;
  }
}

bool expectation_holds(const nlohmann::json& report, const std::string& spec, std::string& msg) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    msg = "malformed --expect (need KEY=VALUE): " + spec;
    return false;
  }
  const std::string key = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  const nlohmann::json* node = resolve_path(report, key);
  if (!node) {
    msg = "no such report key: " + key;
    return false;
  }
  nlohmann::json want = nlohmann::json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (want.is_discarded()) want = raw;
  if (*node == want) return true;
  if (node->is_string() && node->get<std::string>() == raw) return true;
  msg = key + ": report has " + node->dump() + ", expected " + want.dump();
  return false;
}

/// Stamp, check expectations, serialize.  Returns the final exit code.
int finish(const Common& c, nlohmann::json body, int code, std::ostream& out, std::ostream& err) {
  const nlohmann::json report = finalize_report(std::move(body));
  for (const std::string& spec : c.expect) {
    std::string msg;
    if (!expectation_holds(report, spec, msg)) {
      err << "expect: " << msg << '\n';
      code = std::max(code, kAnomaly);
    }
  }
  const std::string text = render_report(report);
  if (c.out == "-")
    out << text;
  else
    write_text_atomic(c.out, text);
  return code;
}

struct SieveArgs {
  std::int64_t t = 2;
  std::uint64_t m = 840;
  unsigned r = 0;
  unsigned s = 0;
  unsigned max_r = 4;
  unsigned max_s = 3;
  std::uint64_t prime_bound = 100000;
  Common common;
};

struct ProveArgs {
  std::int64_t n_bound = 0;
  std::uint64_t prime_bound = 100000;
  unsigned max_r = 4;
  unsigned max_s = 3;
  Common common;
};

struct DescentArgs {
  std::int64_t t = 2;
  std::int64_t n = 0;
  std::string poly;
  Common common;
};

struct ScanArgs {
  int d = 0;
  std::string i_spec;
  std::string w_spec;
  std::string sign = "both";
  Common common;
};

struct ConjectureArgs {
  std::string i_spec;
  std::string w_spec;
  Common common;
};

struct ReduceArgs {
  std::int64_t A = 0;
  std::int64_t B = 0;
  Common common;
};

struct BruteArgs {
  std::int64_t t = 0;
  std::int64_t n_bound = 0;
  std::int64_t A = 0;
  std::int64_t B = 0;
  std::int64_t x_bound = 0;
  Common common;
};

int run_sieve(const SieveArgs& a, bool r_fixed, bool s_fixed, std::ostream& out,
              std::ostream& err) {
  const unsigned r_lo = r_fixed ? a.r : 0, r_hi = r_fixed ? a.r : a.max_r;
  const unsigned s_lo = s_fixed ? a.s : 0, s_hi = s_fixed ? a.s : a.max_s;
  const FactorBaseCache cache(cache_dir_of(a.common));
  const EscalationResult res = escalate_range(a.t, a.m, r_lo, r_hi, s_lo, s_hi, a.prime_bound,
                                              &cache, jobs_of(a.common));
  return finish(a.common, sieve_report_json(res), res.converged ? kOk : kAnomaly, out, err);
}

int run_prove(const ProveArgs& a, std::ostream& out, std::ostream& err) {
  const FactorBaseCache cache(cache_dir_of(a.common));
  ProveOptions opt;
  opt.prime_bound = a.prime_bound;
  opt.max_r = a.max_r;
  opt.max_s = a.max_s;
  opt.cache = &cache;
  opt.jobs = jobs_of(a.common);
  const ProofReport rep = prove_t2(a.n_bound, opt);
  return finish(a.common, proof_report_json(rep), rep.all_valid ? kOk : kAnomaly, out, err);
}

int run_descent(const DescentArgs& a, std::ostream& out, std::ostream& err) {
  const std::int64_t rm = floor_mod_840(a.n);
  if (a.n == 1 || a.n == -1 || a.n == 3 || a.n == -3)
    throw std::invalid_argument("--n is one of the solution indices +-1, +-3; nothing to refute");
  if (!a.poly.empty()) {
    // Polynomial witness mode: N = poly(P_b), value = (P_n / N).
    const Poly poly = parse_poly(a.poly);
    std::int64_t n_eval = a.n;
    if (rm == 839)
      n_eval = -a.n;  // P_n = P_{-n}, and -n = 1 (mod 840)
    else if (rm != 1)
      throw std::invalid_argument("--poly mode needs n = +-1 (mod 840), got n mod 840 = " +
                                  std::to_string(rm));
    const OffsetDecomposition dec = decompose(n_eval);
    const EquationParams params{a.t};
    mpz_class modulus = poly.eval(alpha_power_exact(params, dec.b).p);
    if (modulus < 0) modulus = -modulus;
    const int value = jacobi_witness(params, n_eval, poly, dec.b);
    const nlohmann::json body{{"kind", "polynomial_witness"},
                              {"t", a.t},
                              {"requested_n", a.n},
                              {"n", n_eval},
                              {"w", dec.w},
                              {"c", dec.c},
                              {"d", dec.d},
                              {"a", dec.a},
                              {"b", dec.b},
                              {"poly",
                               {{"c2", mpz_str(poly.c2)},
                                {"c1", mpz_str(poly.c1)},
                                {"c0", mpz_str(poly.c0)}}},
                              {"modulus", mpz_str(modulus)},
                              {"value", value},
                              {"pass", value == -1}};
    return finish(a.common, body, value == -1 ? kOk : kAnomaly, out, err);
  }
  if (rm == 1 || rm == 839) {
    if (a.t != 2)
      throw std::invalid_argument(
          "the built-in descent chain is specific to --t 2; supply --poly for other t");
    const DescentCertificate cert = verify_chain_t2(rm == 1 ? a.n : -a.n);
    const bool ok = cert.valid() && cert.jacobi_value == -1;
    const nlohmann::json body{
        {"kind", "chain"}, {"requested_n", a.n}, {"certificate", to_json(cert)}};
    return finish(a.common, body, ok ? kOk : kAnomaly, out, err);
  }
  if (rm == 3 || rm == 837) {
    const ReducedClaim claim = reduce_class3(EquationParams{a.t}, a.n);
    const nlohmann::json body{
        {"kind", "class3_reduction"}, {"requested_n", a.n}, {"claim", to_json(claim)}};
    return finish(a.common, body, claim.valid() ? kOk : kAnomaly, out, err);
  }
  throw std::invalid_argument("n mod 840 = " + std::to_string(rm) +
                              " is outside the surviving classes {1, 3, 837, 839}; "
                              "those classes are eliminated by the sieve");
}

int run_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<std::int64_t> iv = parse_range(a.i_spec);
  const std::vector<std::int64_t> wv = parse_range(a.w_spec);
  const unsigned jobs = jobs_of(a.common);
  const auto clean = [](const ScanReport& r) {
    return r.exceptions.empty() && r.zero_symbols.empty();
  };
  if (a.sign == "both") {
    const ScanReport plus = scan_family(a.d, iv, wv, PolySign::plus, jobs);
    const ScanReport minus = scan_family(a.d, iv, wv, PolySign::minus, jobs);
    const nlohmann::json body{
        {"reports", nlohmann::json::array({scan_report_json(plus), scan_report_json(minus)})}};
    return finish(a.common, body, clean(plus) && clean(minus) ? kOk : kAnomaly, out, err);
  }
  const PolySign sign = a.sign == "plus" ? PolySign::plus : PolySign::minus;
  const ScanReport rep = scan_family(a.d, iv, wv, sign, jobs);
  return finish(a.common, scan_report_json(rep), clean(rep) ? kOk : kAnomaly, out, err);
}

int run_conjecture31(const ConjectureArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<std::int64_t> iv = parse_range(a.i_spec);
  const std::vector<std::int64_t> wv = parse_range(a.w_spec);
  for (const std::int64_t i : iv)
    if (i < 1 || i % 2 == 0)
      throw std::invalid_argument("--i values must be odd and >= 1, got " + std::to_string(i));
  nlohmann::json instances = nlohmann::json::array();
  std::int64_t failures = 0;
  for (const std::int64_t i : iv)
    for (const std::int64_t w : wv) {
      if (w == 0) continue;
      const Conjecture31Result res = verify_conjecture31(i, w);
      if (!res.ok) ++failures;
      instances.push_back(to_json(res));
    }
  const nlohmann::json body{
      {"d", 3},
      {"i_range", a.i_spec},
      {"w_range", a.w_spec},
      {"instances", std::move(instances)},
      {"failures", failures},
      {"all_ok", failures == 0},
      {"note", "two-sided identity for an open conjecture; instances are evidence, not proof"}};
  return finish(a.common, body, failures == 0 ? kOk : kAnomaly, out, err);
}

int run_reduce(const ReduceArgs& a, std::ostream& out, std::ostream& err) {
  const ReductionResult res = to_canonical(a.A, a.B);
  return finish(a.common, reduction_report_json(res), kOk, out, err);
}

int run_brute(const BruteArgs& a, bool index_mode, std::ostream& out, std::ostream& err) {
  if (index_mode) {
    const std::vector<std::int64_t> indices =
        brute_force_index(EquationParams{a.t}, a.n_bound);
    const nlohmann::json body{{"mode", "index"},
                              {"t", a.t},
                              {"n_bound", a.n_bound},
                              {"square_indices", indices}};
    return finish(a.common, body, kOk, out, err);
  }
  const auto sols = brute_force_quartic(a.A, a.B, a.x_bound);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [x, y] : sols) list.push_back({{"x", mpz_str(x)}, {"y", mpz_str(y)}});
  const nlohmann::json body{{"mode", "quartic"},
                            {"A", a.A},
                            {"B", a.B},
                            {"x_bound", a.x_bound},
                            {"solutions", std::move(list)}};
  return finish(a.common, body, kOk, out, err);
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pell-sequence sieve, descent certificates, and witness-family scans for the "
               "quartic equations (t+1)X^4 - tY^2 = 1"};
  app.set_version_flag("--version", "qs 0.1.0");
  app.require_subcommand(1);

  SieveArgs sieve_args;
  CLI::App* sieve_cmd =
      app.add_subcommand("sieve", "Eliminate odd index classes mod M = 2^r 3^s m by factor-base "
                                  "witnesses, escalating (r, s) until only {1, 3, m-3, m-1} mod m "
                                  "survive");
  sieve_cmd->add_option("--t", sieve_args.t, "Equation parameter t >= 1")->required();
  sieve_cmd->add_option("--m", sieve_args.m, "Primary modulus")->capture_default_str();
  CLI::Option* r_opt = sieve_cmd->add_option("--r", sieve_args.r, "Fix the power of 2 in M");
  CLI::Option* s_opt = sieve_cmd->add_option("--s", sieve_args.s, "Fix the power of 3 in M");
  sieve_cmd->add_option("--max-r", sieve_args.max_r, "Escalation bound on r")
      ->capture_default_str()
      ->excludes(r_opt);
  sieve_cmd->add_option("--max-s", sieve_args.max_s, "Escalation bound on s")
      ->capture_default_str()
      ->excludes(s_opt);
  sieve_cmd->add_option("--prime-bound", sieve_args.prime_bound, "Factor-base prime bound")
      ->capture_default_str();
  add_common(sieve_cmd, sieve_args.common);

  ProveArgs prove_args;
  CLI::App* prove_cmd = app.add_subcommand(
      "prove-t2", "End-to-end t = 2 run: sieve, then a certificate for every surviving index "
                  "class representative up to --n-bound");
  prove_cmd->add_option("--n-bound", prove_args.n_bound, "Verify all |n| <= n-bound")->required();
  prove_cmd->add_option("--prime-bound", prove_args.prime_bound, "Factor-base prime bound")
      ->capture_default_str();
  prove_cmd->add_option("--max-r", prove_args.max_r, "Escalation bound on r")
      ->capture_default_str();
  prove_cmd->add_option("--max-s", prove_args.max_s, "Escalation bound on s")
      ->capture_default_str();
  add_common(prove_cmd, prove_args.common);

  DescentArgs descent_args;
  CLI::App* descent_cmd = app.add_subcommand(
      "descent", "Evaluate one descent: the full t = 2 chain, the class +-3 reduction, or a "
                 "custom polynomial witness (P_n / poly(P_b))");
  descent_cmd->add_option("--t", descent_args.t, "Equation parameter")->capture_default_str();
  descent_cmd->add_option("--n", descent_args.n, "Index n (may be negative)")->required();
  descent_cmd->add_option("--poly", descent_args.poly,
                          "Witness polynomial, linear:c1,c0 or quad:c2,c1,c0");
  add_common(descent_cmd, descent_args.common);

  ScanArgs scan_args;
  CLI::App* scan_cmd = app.add_subcommand(
      "scan", "Scan a witness family d in {2,3,4,6}, t = d i^2 - 1, over a grid of (i, w)");
  scan_cmd->add_option("--d", scan_args.d, "Family discriminant")
      ->required()
      ->check(CLI::IsMember({2, 3, 4, 6}));
  scan_cmd->add_option("--i", scan_args.i_spec, "Range of i, e.g. 1..5:odd")->required();
  scan_cmd->add_option("--w", scan_args.w_spec, "Range of w (n = 1 + 840w), e.g. -25..25")
      ->required();
  scan_cmd->add_option("--sign", scan_args.sign, "Which sign of the polynomial family")
      ->check(CLI::IsMember({"plus", "minus", "both"}))
      ->capture_default_str();
  add_common(scan_cmd, scan_args.common);

  ConjectureArgs conjecture_args;
  CLI::App* conjecture_cmd = app.add_subcommand(
      "conjecture31", "Check the two-sided d = 3 identity (odd i) instance by instance");
  conjecture_cmd->add_option("--i", conjecture_args.i_spec, "Range of odd i, e.g. 1..5:odd")
      ->required();
  conjecture_cmd->add_option("--w", conjecture_args.w_spec, "Range of w, e.g. -10..10")
      ->required();
  add_common(conjecture_cmd, conjecture_args.common);

  ReduceArgs reduce_args;
  CLI::App* reduce_cmd = app.add_subcommand(
      "reduce", "Map A x^4 - B y^2 = 1 to its canonical parameter t via the pellian "
                "A a^2 - B b^2 = 1");
  reduce_cmd->add_option("--A", reduce_args.A, "Coefficient A >= 1")
      ->required()
      ->check(CLI::PositiveNumber);
  reduce_cmd->add_option("--B", reduce_args.B, "Coefficient B >= 1")
      ->required()
      ->check(CLI::PositiveNumber);
  add_common(reduce_cmd, reduce_args.common);

  BruteArgs brute_args;
  CLI::App* brute_cmd = app.add_subcommand(
      "brute", "Exhaustive oracles: square indices P_n = x^2 (--t/--n-bound) or quartic "
               "solutions (--A/--B/--x-bound)");
  CLI::Option* brute_t = brute_cmd->add_option("--t", brute_args.t, "Equation parameter");
  CLI::Option* brute_n = brute_cmd->add_option("--n-bound", brute_args.n_bound, "Index bound");
  CLI::Option* brute_A = brute_cmd->add_option("--A", brute_args.A, "Coefficient A");
  CLI::Option* brute_B = brute_cmd->add_option("--B", brute_args.B, "Coefficient B");
  CLI::Option* brute_x = brute_cmd->add_option("--x-bound", brute_args.x_bound, "Search bound");
  add_common(brute_cmd, brute_args.common);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (sieve_cmd->parsed())
      return run_sieve(sieve_args, r_opt->count() > 0, s_opt->count() > 0, out, err);
    if (prove_cmd->parsed()) return run_prove(prove_args, out, err);
    if (descent_cmd->parsed()) return run_descent(descent_args, out, err);
    if (scan_cmd->parsed()) return run_scan(scan_args, out, err);
    if (conjecture_cmd->parsed()) return run_conjecture31(conjecture_args, out, err);
    if (reduce_cmd->parsed()) return run_reduce(reduce_args, out, err);
    if (brute_cmd->parsed()) {
      const bool index_mode = brute_t->count() > 0 || brute_n->count() > 0;
      const bool quartic_mode =
          brute_A->count() > 0 || brute_B->count() > 0 || brute_x->count() > 0;
      if (index_mode == quartic_mode)
        throw std::invalid_argument(
            "brute needs exactly one of --t/--n-bound or --A/--B/--x-bound");
      if (index_mode && (brute_t->count() == 0 || brute_n->count() == 0))
        throw std::invalid_argument("index mode needs both --t and --n-bound");
      if (quartic_mode &&
          (brute_A->count() == 0 || brute_B->count() == 0 || brute_x->count() == 0))
        throw std::invalid_argument("quartic mode needs --A, --B and --x-bound");
      return run_brute(brute_args, index_mode, out, err);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAnomaly;
  }
  return kUsage;  // unreachable: require_subcommand(1)
}

}  // namespace qs::cli
