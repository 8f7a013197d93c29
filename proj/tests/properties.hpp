#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qs::props {

// One randomized (fixed-seed) or exhaustive property run.  failures == 0 is
// the pass condition; first_failure carries a reproducible description.
struct Outcome {
  long cases = 0;
  long failures = 0;
  std::string first_failure;
};

Outcome pell_identity();           // (t+1)P^2 - tQ^2 = 1 (odd k), P^2 - t(t+1)Q^2 = 1 (even k)
Outcome shift_congruence();        // P_{n+2k} = P_n (mod Q_k), n odd, k even
Outcome q_divisibility();          // Q_{2k} | Q_{6k}, k odd
Outcome sextic_identity_t2();      // Q_{6k} = Q_{2k} * 3(4P_k^2-1)(12P_k^2-1), t = 2, k odd
Outcome sextic_quotients();        // P_{6k}/P_{2k} and Q_{6k}/Q_{2k} as quartics in P_k, all t
Outcome divisor_fact_t2();         // (2P_k + 1) | Q_{6k}, t = 2, k odd
Outcome residue_mod8_t2();         // P_k = 1 (mod 8), t = 2, k odd
Outcome triple_index();            // P_{3k} = P_k ((t+1)P_k^2 + 3t Q_k^2), k odd
Outcome negative_index();          // P_{-k} = P_k, Q_{-k} = -Q_k
Outcome mod_exact_agreement();     // alpha_power_mod == alpha_power_exact reduced

Outcome jacobi_oracle();           // vs quadratic-residue brute force, all odd n <= 200, all a
Outcome isqrt_oracle();            // vs squaring, 10^5 random values

struct NamedProperty {
  const char* name;
  Outcome (*fn)();
};

/// The identity suite in a fixed order (everything except the two oracles).
const std::vector<NamedProperty>& identity_suite();

}  // namespace qs::props
