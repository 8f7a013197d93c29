#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qs/pell.hpp"
#include "qs/sieve.hpp"

namespace qs {

// Descent layer: the sieve leaves only the index classes n = +-1, +-3
// (mod 840).  For class 1 (covering class -1 through P_{-n} = P_n) the offset
// n - 1 = 840w is rewritten as a product a*b with b odd, b = 1 (mod 4),
// 3 | b, and a = 16 (mod 24); the modulus N = 2*P_b + 1 divides Q_{6b}, which
// pins P_n mod N down to a chain of Jacobi-symbol equalities ending in -1.
// Since squares have symbol 0 or +1, P_n is not a square.  Class +-3 reduces
// to the factorization P_{3k} = P_k * ((t+1)P_k^2 + 3t*Q_k^2) and refers back
// to the sieve or to a class-1 certificate for the inner index k.

/// n = 1 + 840w split into the witness exponents: with c = ord_3(840w) and
/// d = 24w / 3^c, the table
///
///   d =  8 (mod 24), c even:  a = 35d, b = 3^c
///   d = 16 (mod 24), c even:  a = 7d,  b = 5 * 3^c
///   d =  8 (mod 24), c odd:   a = 5d,  b = 7 * 3^c
///   d = 16 (mod 24), c odd:   a = d,   b = 35 * 3^c
///
/// yields n - 1 = a*b with the sign of w carried by a, and a = 24*m_a - 8.
struct OffsetDecomposition {
  std::int64_t n = 0;
  std::int64_t w = 0;   // (n - 1) / 840, nonzero
  unsigned c = 0;       // ord_3(840w) >= 1
  std::int64_t d = 0;   // 24w / 3^c, = 8 or 16 (mod 24), coprime to 3
  std::int64_t a = 0;   // = 16 (mod 24)
  std::int64_t b = 0;   // positive, odd, = 1 (mod 4), divisible by 3
  std::int64_t m_a = 0; // (a + 8) / 24
};

/// Decompose n = 1 (mod 840), n != 1.  Total on its domain; throws outside it.
OffsetDecomposition decompose(std::int64_t n);

/// The class-1 witness modulus for t = 2: N = 2*P_b + 1.
mpz_class witness_modulus_t2(std::int64_t b);

/// Quadratic-or-linear integer polynomial c2*x^2 + c1*x + c0.
struct Poly {
  mpz_class c2 = 0;
  mpz_class c1 = 0;
  mpz_class c0 = 0;
  mpz_class eval(const mpz_class& x) const { return (c2 * x + c1) * x + c0; }
};

/// Jacobi symbol (P_n / N) with N = poly(P_b), computed by modular powering
/// (P_n itself is never materialized).  Requires N odd with |N| >= 3; returns
/// 0 when gcd(P_n, N) > 1.
int jacobi_witness(const EquationParams& params, std::int64_t n, const Poly& poly, std::int64_t b);

struct ChainCheck {
  std::string name;
  bool pass = false;
};

/// Machine-checkable record of one class-1 descent at t = 2.
struct DescentCertificate {
  std::int64_t t = 2;
  std::int64_t n = 0;
  OffsetDecomposition decomposition;
  mpz_class witness_modulus;      // N = 2*P_b + 1
  std::vector<ChainCheck> chain;  // congruence and Jacobi-equality checks, in order
  int jacobi_value = 0;           // (P_n / N), expected -1
  bool valid() const;
};

/// Evaluate the full t = 2 descent chain for n = 1 (mod 840), |n| > 1.
/// Failed checks yield valid() == false rather than an exception.
DescentCertificate verify_chain_t2(std::int64_t n);

/// Mod-8 obstruction used by the class +-3 reduction: P = 1 (mod 8) and Q odd
/// force P^2 + 2Q^2 = 3 (mod 8), never a square.  Returns true if the full
/// residue enumeration confirms it.
bool check_class3_obstruction();

/// Outcome of reducing an index n = +-3 (mod 840) to its inner index k = n/3.
struct ReducedClaim {
  enum class Subcase { sieve_eliminated, class1_descent };
  std::int64_t t = 2;
  std::int64_t n = 0;
  std::int64_t k = 0;             // n / 3, odd
  std::int64_t k_normalized = 0;  // k or -k, whichever is = 1 (mod 280)
  std::int64_t k_mod_840 = 0;     // residue of k_normalized: 1, 281 or 561
  mpz_class factor1;              // P_k
  mpz_class factor2;              // (t+1)P_k^2 + 3t*Q_k^2
  bool product_matches = false;   // factor1 * factor2 == P_n
  bool obstruction_holds = false; // the mod-8 enumeration above
  Subcase subcase = Subcase::sieve_eliminated;
  std::optional<DescentCertificate> class1_certificate;  // when k lands in class 1 (t = 2)
  std::optional<std::pair<std::uint64_t, SieveWitness>> sieve_witness;  // attached by prove_t2
  bool valid() const;
};

/// Reduce n = +-3 (mod 840), n != +-3.  For t = 2 a class-1 inner index gets
/// a nested descent certificate; otherwise the claim records the sieve class
/// that eliminates k.
ReducedClaim reduce_class3(const EquationParams& params, std::int64_t n);

struct ProofEntry {
  std::int64_t n = 0;             // positive representative; covers -n as well
  std::int64_t residue_mod_840 = 0;
  std::optional<DescentCertificate> certificate;  // classes 1 and 839
  std::optional<ReducedClaim> claim;              // classes 3 and 837
  bool valid = false;
};

struct ProofReport {
  std::int64_t n_bound = 0;
  EscalationResult sieve;
  std::vector<ProofEntry> entries;
  std::int64_t largest_b = 0;     // largest witness exponent b used by any chain
  bool all_valid = false;
  std::string verdict;            // "only n ∈ {±1, ±3}" when everything checks
};

struct ProveOptions {
  std::uint64_t prime_bound = 100000;
  unsigned max_r = 4;
  unsigned max_s = 3;
  const FactorBaseCache* cache = nullptr;
  unsigned jobs = 1;
};

/// End-to-end t = 2 pipeline: sieve mod 840*2^r*3^s, then certificates for
/// every surviving index class representative 3 < n <= n_bound.
ProofReport prove_t2(std::int64_t n_bound, const ProveOptions& options = {});

}  // namespace qs
