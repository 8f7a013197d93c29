#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include <gmpxx.h>

namespace qs {

// Sequences P_k, Q_k attached to alpha = sqrt(t+1) + sqrt(t):
//
//   k odd:   alpha^k = P_k*sqrt(t+1) + Q_k*sqrt(t),   (t+1)P_k^2 - t*Q_k^2 = 1
//   k even:  alpha^k = P_k + Q_k*sqrt(t(t+1)),        P_k^2 - t(t+1)*Q_k^2 = 1
//
// with P_{-k} = P_k and Q_{-k} = -Q_k.  P_n is a square for odd n exactly
// when x = sqrt(P_n), y = Q_n solve (t+1)x^4 - t*y^2 = 1, which is what the
// sieve/descent layers above this one reason about.
//
// Multiplying alpha^j * alpha^k combines states by the parity-dependent rules
//
//   odd*odd:   P = (t+1)P1P2 + t*Q1Q2        Q = P1Q2 + Q1P2      (result even)
//   odd*even:  P = P1P2 + t*Q1Q2             Q = Q1P2 + (t+1)P1Q2 (result odd)
//   even*even: P = P1P2 + t(t+1)Q1Q2         Q = P1Q2 + Q1P2      (result even)
//
// Stepping an odd index by two (multiply by alpha^2 = (2t+1) + 2*sqrt(t(t+1)))
// gives the classical recurrences; for even r the odd-step forms
//
//   P_{2r+1} = (2P_r^2 - 1) + 2t*P_r*Q_r
//   Q_{2r+1} = (2P_r^2 - 1) + 2(t+1)*P_r*Q_r
//
// follow from odd*even applied to alpha^{r+1} * alpha^r (they specialize at
// t = 2 to the identities the descent chain checks verbatim).

enum class Parity : std::uint8_t { odd, even };

inline Parity parity_of(std::int64_t k) { return (k % 2 == 0) ? Parity::even : Parity::odd; }

/// Parameter t >= 1 of the quartic (t+1)X^4 - t*Y^2 = 1.
struct EquationParams {
  std::int64_t t;
  explicit EquationParams(std::int64_t t_) : t(t_) {
    if (t_ < 1) throw std::invalid_argument("EquationParams: t must be >= 1");
  }
};

/// Exact pair state of alpha^k.  The parity of the state is the parity of k.
struct AlphaPower {
  std::int64_t t = 1;
  std::int64_t k = 0;
  mpz_class p = 1;  // P_k
  mpz_class q = 0;  // Q_k (signed; negative for k < 0)
  Parity parity() const { return parity_of(k); }
};

/// Pair state of alpha^k reduced mod an odd modulus >= 3.  The index itself is
/// folded away by the powering loop, so parity is carried explicitly.
struct ModPair {
  std::int64_t t = 1;
  mpz_class modulus = 3;
  mpz_class p = 1;  // P_k mod modulus, in [0, modulus)
  mpz_class q = 0;  // Q_k mod modulus, in [0, modulus)
  Parity parity = Parity::even;
};

/// Product of two exact pair states sharing the same t.
AlphaPower pair_multiply(const AlphaPower& x, const AlphaPower& y);

/// Product of two mod-N pair states; throws on modulus or parameter mismatch.
ModPair pair_multiply(const ModPair& x, const ModPair& y);

/// alpha^k by binary powering: O(log|k|) big-integer multiplications.
AlphaPower alpha_power_exact(const EquationParams& params, std::int64_t k);

/// alpha^k mod an odd modulus >= 3; k may be negative (P is even in k, Q odd).
ModPair alpha_power_mod(const EquationParams& params, std::int64_t k, const mpz_class& modulus);

/// Jacobi symbol (a/n) for odd n >= 1; (a/1) = 1.  Throws on even or
/// nonpositive n.  a may be negative.
int jacobi(const mpz_class& a, const mpz_class& n);

struct SqrtResult {
  mpz_class root;  // floor(sqrt(n))
  bool exact;      // n == root^2
};

/// Floor square root with exactness flag; throws on negative input.
SqrtResult integer_sqrt(const mpz_class& n);

/// For odd k: P_{3k} = P_k * ((t+1)P_k^2 + 3t*Q_k^2).  Returns the two factors
/// (P_k, cofactor).  The cofactor is 3*square + odd-square residue material
/// used by the index-class-3 reduction.  Throws on even k.
std::pair<mpz_class, mpz_class> triple_index_factor(const EquationParams& params, std::int64_t k);

}  // namespace qs
