#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qs/descent.hpp"

namespace qs {

// Parameterized witness families: for t = d*i^2 - 1 the quotient
// 16(t+1)^2 x^4 - 16(t+1) x^2 + {1, 3} factors over Z, and one factor
// evaluated at x = P_b supplies an odd modulus N for which (P_n / N) is
// observed to be -1 across every tested (i, w).  The d = 3, i = 1 member is
// exactly the proven class-1 descent modulus 2*P_b + 1.

enum class PolySign { plus, minus };

/// The family polynomial p(x) for d in {2, 3, 4, 6}:
///   d = 2: 8i^2 x^2 +- 4i x - 1      (divides the P-quotient)
///   d = 3: 2i x +- 1                 (divides the Q-quotient)
///   d = 4: 4i x +- 1                 (divides the Q-quotient)
///   d = 6: 24i^2 x^2 +- 12i x + 1    (divides the P-quotient)
Poly family_poly(int d, std::int64_t i, PolySign sign);

struct ScanEntry {
  std::int64_t i = 0;
  std::int64_t t = 0;   // d*i^2 - 1
  std::int64_t n = 0;   // 1 + 840w
  std::int64_t b = 0;   // witness exponent from decompose(n)
  mpz_class modulus;    // poly(P_b)
  int value = 0;        // jacobi(P_n mod modulus, modulus)
};

struct ScanSkip {
  std::int64_t i = 0;
  std::int64_t w = 0;
  std::string reason;
};

struct ScanReport {
  int d = 0;
  PolySign sign = PolySign::plus;
  std::vector<std::int64_t> i_values;
  std::vector<std::int64_t> w_values;     // zeros are skipped
  std::vector<ScanEntry> tested;
  std::vector<ScanEntry> exceptions;      // value != -1
  std::vector<ScanEntry> zero_symbols;    // value == 0 (shared factor; also an exception)
  std::vector<ScanSkip> skipped;          // modulus even or |modulus| < 3
};

/// Evaluate the family over the (i, w) grid.  Deterministic entry order
/// (i outer, w inner) regardless of jobs.
ScanReport scan_family(int d, std::span<const std::int64_t> i_values,
                       std::span<const std::int64_t> w_values, PolySign sign, unsigned jobs = 1);

struct Conjecture31Result {
  std::int64_t i = 0;
  std::int64_t t = 0;   // 3i^2 - 1
  std::int64_t n = 0;
  std::int64_t b = 0;
  int lhs = 0;          // (P_n / N), N = 2i*P_b + 1
  int middle = 0;       // (-1)^((i-1)/2) * (2t*Q_b + 1 / N)
  bool ok = false;      // lhs == middle == -1
};

/// The two-sided identity claimed for d = 3, odd i: both the direct symbol
/// and the signed companion symbol evaluate to -1.
Conjecture31Result verify_conjecture31(std::int64_t i, std::int64_t w);

}  // namespace qs
