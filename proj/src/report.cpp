#include "qs/report.hpp"

#include <fstream>
#include <random>

#include <unistd.h>

namespace qs {

std::string mpz_str(const mpz_class& v) { return v.get_str(10); }

nlohmann::json to_json(const SieveWitness& w) {
  return {{"p", w.prime}, {"symbol", w.symbol}};
}

nlohmann::json to_json(const SieveOutcome& outcome) {
  nlohmann::json witnesses = nlohmann::json::object();
  for (const auto& [j, w] : outcome.witnesses) witnesses[std::to_string(j)] = to_json(w);
  return {{"t", outcome.t},
          {"m", outcome.m},
          {"M", outcome.M},
          {"survivors_mod_M", outcome.survivors_mod_M},
          {"survivors_mod_m", outcome.survivors_mod_m},
          {"witnesses", std::move(witnesses)}};
}

nlohmann::json sieve_report_json(const EscalationResult& res) {
  nlohmann::json j = to_json(res.outcome);
  j["r"] = res.config.r;
  j["s"] = res.config.s;
  j["prime_bound"] = res.fb.prime_bound;
  j["factor_base"] = res.fb.primes;
  j["converged"] = res.converged;
  return j;
}

nlohmann::json to_json(const DescentCertificate& cert) {
  nlohmann::json chain = nlohmann::json::array();
  for (const ChainCheck& c : cert.chain) chain.push_back({{"name", c.name}, {"pass", c.pass}});
  return {{"t", cert.t},
          {"n", cert.n},
          {"w", cert.decomposition.w},
          {"c", cert.decomposition.c},
          {"d", cert.decomposition.d},
          {"a", cert.decomposition.a},
          {"b", cert.decomposition.b},
          {"witness_modulus", mpz_str(cert.witness_modulus)},
          {"chain", std::move(chain)},
          {"jacobi_value", cert.jacobi_value},
          {"valid", cert.valid()}};
}

nlohmann::json to_json(const ReducedClaim& claim) {
  nlohmann::json j{{"t", claim.t},
                   {"n", claim.n},
                   {"k", claim.k},
                   {"k_normalized", claim.k_normalized},
                   {"k_mod_840", claim.k_mod_840},
                   {"factor1", mpz_str(claim.factor1)},
                   {"factor2", mpz_str(claim.factor2)},
                   {"product_matches", claim.product_matches},
                   {"obstruction_mod8", claim.obstruction_holds},
                   {"subcase", claim.subcase == ReducedClaim::Subcase::sieve_eliminated
                                   ? "sieve_eliminated"
                                   : "class1_descent"},
                   {"valid", claim.valid()}};
  if (claim.class1_certificate) j["class1_certificate"] = to_json(*claim.class1_certificate);
  if (claim.sieve_witness)
    j["sieve_witness"] = {{"j", claim.sieve_witness->first},
                          {"p", claim.sieve_witness->second.prime},
                          {"symbol", claim.sieve_witness->second.symbol}};
  return j;
}

nlohmann::json proof_report_json(const ProofReport& report) {
  nlohmann::json certificates = nlohmann::json::array();
  for (const ProofEntry& entry : report.entries) {
    nlohmann::json e{{"n", entry.n},
                     {"covers", {entry.n, -entry.n}},
                     {"residue_mod_840", entry.residue_mod_840},
                     {"valid", entry.valid}};
    if (entry.certificate) e["certificate"] = to_json(*entry.certificate);
    if (entry.claim) e["claim"] = to_json(*entry.claim);
    certificates.push_back(std::move(e));
  }
  return {{"n_bound", report.n_bound},
          {"sieve_report_ref", "sieve_report"},
          {"sieve_report", sieve_report_json(report.sieve)},
          {"certificates", std::move(certificates)},
          {"largest_b", report.largest_b},
          {"all_valid", report.all_valid},
          {"verdict", report.verdict}};
}

namespace {

nlohmann::json to_json(const ScanEntry& e) {
  return {{"i", e.i}, {"t", e.t}, {"n", e.n}, {"b", e.b},
          {"N", mpz_str(e.modulus)}, {"value", e.value}};
}

nlohmann::json range_echo(const std::vector<std::int64_t>& values) {
  if (values.empty()) return "";
  if (values.size() == 1) return std::to_string(values.front());
  return std::to_string(values.front()) + ".." + std::to_string(values.back());
}

}  // namespace

nlohmann::json scan_report_json(const ScanReport& report) {
  auto entry_list = [](const std::vector<ScanEntry>& entries) {
    nlohmann::json out = nlohmann::json::array();
    for (const ScanEntry& e : entries) out.push_back(to_json(e));
    return out;
  };
  nlohmann::json skipped = nlohmann::json::array();
  for (const ScanSkip& s : report.skipped)
    skipped.push_back({{"i", s.i}, {"w", s.w}, {"reason", s.reason}});
  return {{"d", report.d},
          {"sign", report.sign == PolySign::plus ? "+" : "-"},
          {"i_range", range_echo(report.i_values)},
          {"w_range", range_echo(report.w_values)},
          {"tested", entry_list(report.tested)},
          {"exceptions", entry_list(report.exceptions)},
          {"zero_symbols", entry_list(report.zero_symbols)},
          {"skipped", std::move(skipped)}};
}

nlohmann::json to_json(const Conjecture31Result& res) {
  return {{"i", res.i}, {"t", res.t},      {"n", res.n},           {"b", res.b},
          {"lhs", res.lhs}, {"middle", res.middle}, {"ok", res.ok}};
}

nlohmann::json reduction_report_json(const ReductionResult& res) {
  nlohmann::json j{{"A", res.A}, {"B", res.B}, {"solvable", res.solvable},
                   {"degenerate", res.degenerate}};
  if (res.fundamental) {
    j["a0"] = mpz_str(res.fundamental->a0);
    j["b0"] = mpz_str(res.fundamental->b0);
  } else {
    j["a0"] = nullptr;
    j["b0"] = nullptr;
  }
  j["t"] = res.t ? nlohmann::json(mpz_str(*res.t)) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json finalize_report(nlohmann::json body) {
  body["schema"] = 1;
  body["meta"] = {{"tool", "qs"}, {"version", "0.1.0"}};
  return body;
}

std::string render_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::random_device rd;
  const std::filesystem::path tmp =
      dir / (path.filename().string() + ".tmp" + std::to_string(rd()) + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move report into place at " + path.string());
  }
}

}  // namespace qs
