#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qs/pell.hpp"

namespace qs {

// Reduction of the general equation A*x^4 - B*y^2 = 1 (A, B >= 1) onto the
// canonical form (t+1)X^4 - t*Y^2 = 1: the fundamental solution (a0, b0) of the
// pellian A*a^2 - B*b^2 = 1 is the unit sqrt(A)*a0 + sqrt(B)*b0 = alpha, so
// t = B*b0^2 = A*a0^2 - 1, and every solution column a_j equals a0*P_{2j-1}.

struct Fundamental {
  mpz_class a0;
  mpz_class b0;
};

/// Fundamental solution (x1, y1), y1 minimal positive, of x^2 - D*y^2 = 1 for
/// nonsquare D >= 2, by the continued fraction of sqrt(D).
Fundamental pell_fundamental(const mpz_class& D);

/// Least positive solution of A*a^2 - B*b^2 = 1, if one exists.  Absence is
/// definitive: gcd(A,B) > 1 and square-discriminant cases are decided
/// exactly, and otherwise solvability is equivalent to (u1+1)/2A and
/// (u1-1)/2B both being perfect squares, u1 + v1*sqrt(AB) the fundamental
/// unit.  A = 1 returns the degenerate (1, 0).
std::optional<Fundamental> fundamental_solution(std::int64_t A, std::int64_t B);

struct ReductionResult {
  std::int64_t A = 0;
  std::int64_t B = 0;
  bool solvable = false;
  std::optional<Fundamental> fundamental;
  std::optional<mpz_class> t;   // B*b0^2 (= A*a0^2 - 1), present when solvable
  bool degenerate = false;      // t < 1 (i.e. A = 1): outside the canonical form
};

/// Map (A, B) to the canonical parameter t, flagging degenerate cases.
ReductionResult to_canonical(std::int64_t A, std::int64_t B);

/// All solutions of A*x^4 - B*y^2 = 1 with 1 <= x <= x_bound, by direct
/// search; the independent oracle for everything above.
std::vector<std::pair<mpz_class, mpz_class>> brute_force_quartic(std::int64_t A, std::int64_t B,
                                                                 std::int64_t x_bound);

/// All odd n in [1, n_bound] with P_n a perfect square, by stepping the
/// sequence and testing each value.
std::vector<std::int64_t> brute_force_index(const EquationParams& params, std::int64_t n_bound);

}  // namespace qs
