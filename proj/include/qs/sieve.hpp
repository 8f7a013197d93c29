#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "qs/pell.hpp"

namespace qs {

// Congruence sieve on the index classes j (mod M), j odd.  A witness prime p
// with alpha^M = 1 in the mod-p pair ring makes P_j mod p constant on each
// class; a Legendre symbol (P_j/p) = -1 then rules out every index in the
// class (P_n can't be a square there).  Symbol 0 proves nothing and never
// eliminates.  The surviving classes are the ones the descent layer must
// handle by other means.

struct SieveConfig {
  std::int64_t t = 2;
  std::uint64_t m = 840;          // primary modulus the survivors are read mod
  unsigned r = 0;                 // extra factor 2^r
  unsigned s = 0;                 // extra factor 3^s
  std::uint64_t prime_bound = 100000;

  /// M = m * 2^r * 3^s, overflow- and size-checked.
  std::uint64_t working_modulus() const;
};

struct FactorBase {
  std::int64_t t = 2;
  std::uint64_t M = 0;
  std::uint64_t prime_bound = 0;
  std::vector<std::uint64_t> primes;  // increasing
};

struct SieveWitness {
  std::uint64_t prime = 0;
  int symbol = -1;  // always -1: only certified non-residues eliminate
};

struct SieveOutcome {
  std::int64_t t = 2;
  std::uint64_t m = 0;
  std::uint64_t M = 0;
  std::vector<std::uint64_t> survivors_mod_M;          // odd j in [1, M)
  std::vector<std::uint64_t> survivors_mod_m;          // sorted, deduplicated
  std::map<std::uint64_t, SieveWitness> witnesses;     // eliminated j -> first prime
};

/// On-disk JSON cache of factor bases, keyed by (t, M, prime_bound).
/// Corrupt or missing entries are treated as cache misses.  Writes are atomic
/// (temp file + rename).  An empty directory path disables the cache.
class FactorBaseCache {
 public:
  explicit FactorBaseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::optional<FactorBase> load(std::int64_t t, std::uint64_t M, std::uint64_t prime_bound) const;
  void store(const FactorBase& fb) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

/// All odd primes p <= prime_bound with p coprime to 2t(t+1) and to M, and
/// alpha^M = (1, 0, even) mod p.  Deterministic (increasing order) regardless
/// of jobs.
FactorBase build_factor_base(const SieveConfig& config, const FactorBaseCache* cache = nullptr,
                             unsigned jobs = 1);

/// Smallest even L > 0 with alpha^L = (1, 0, even) mod p, for an odd prime
/// p not dividing 2t(t+1).  L divides 2(p-1) or 2(p+1) according to the
/// quadratic character of t(t+1) mod p.
std::uint64_t sequence_period(const EquationParams& params, std::uint64_t p);

/// One full sieve pass over the odd classes j mod M.  Witness assignment is
/// deterministic: the smallest eliminating prime wins, independent of jobs.
SieveOutcome run_sieve(const FactorBase& fb, std::uint64_t m, unsigned jobs = 1);

struct EscalationResult {
  SieveConfig config;     // with the chosen (r, s)
  FactorBase fb;
  SieveOutcome outcome;
  bool converged = false; // survivors_mod_m subset of {1, 3, m-3, m-1}
};

/// Try (r, s) in increasing order of M until the survivors mod m collapse to
/// the classes {1, 3, m-3, m-1}.  On failure returns the attempt with the
/// fewest surviving classes, flagged converged=false.
EscalationResult escalate(std::int64_t t, std::uint64_t m, unsigned max_r, unsigned max_s,
                          std::uint64_t prime_bound, const FactorBaseCache* cache = nullptr,
                          unsigned jobs = 1);

/// Same, with explicit [r_lo, r_hi] x [s_lo, s_hi] rectangles (the CLI uses
/// this to pin r or s to a fixed value).
EscalationResult escalate_range(std::int64_t t, std::uint64_t m, unsigned r_lo, unsigned r_hi,
                                unsigned s_lo, unsigned s_hi, std::uint64_t prime_bound,
                                const FactorBaseCache* cache = nullptr, unsigned jobs = 1);

}  // namespace qs
