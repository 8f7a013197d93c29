#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qs/conjecture.hpp"
#include "qs/descent.hpp"
#include "qs/reduction.hpp"
#include "qs/sieve.hpp"

namespace qs {

// JSON report assembly.  Conventions shared by every writer:
//   * "schema": 1 at the top level of each file;
//   * big integers (sequence values, moduli) are decimal strings;
//   * machine-sized integers (indices, primes, parameters) are JSON numbers;
//   * no timestamps anywhere, so identical inputs give identical bytes.

std::string mpz_str(const mpz_class& v);

nlohmann::json to_json(const SieveWitness& w);
nlohmann::json to_json(const SieveOutcome& outcome);
/// Full sieve report: config echo + factor base + outcome + convergence flag.
nlohmann::json sieve_report_json(const EscalationResult& res);

nlohmann::json to_json(const DescentCertificate& cert);
nlohmann::json to_json(const ReducedClaim& claim);
nlohmann::json proof_report_json(const ProofReport& report);

nlohmann::json scan_report_json(const ScanReport& report);
nlohmann::json to_json(const Conjecture31Result& res);

nlohmann::json reduction_report_json(const ReductionResult& res);

/// Stamp "schema": 1 and the static generator tag onto a top-level report.
nlohmann::json finalize_report(nlohmann::json body);

/// Serialize with a stable 2-space layout and trailing newline.
std::string render_report(const nlohmann::json& report);

/// Write via temp file + rename so readers never observe partial output.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace qs
