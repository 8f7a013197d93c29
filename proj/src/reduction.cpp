#include "qs/reduction.hpp"

#include <numeric>

namespace qs {

namespace {

bool is_square(const mpz_class& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t());
}

mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

}  // namespace

Fundamental pell_fundamental(const mpz_class& D) {
  if (D < 2 || is_square(D)) throw std::invalid_argument("pell_fundamental: D must be a nonsquare >= 2");
  // classic continued-fraction expansion of sqrt(D); the fundamental +1 unit
  // appears among the convergents within two periods
  const mpz_class a0 = isqrt(D);
  mpz_class m = 0, d = 1, a = a0;
  mpz_class h_prev = 1, h = a0;   // numerators
  mpz_class k_prev = 0, k = 1;    // denominators
  for (long iter = 0; iter < 100000000L; ++iter) {
    if (h * h - D * k * k == 1) return {h, k};
    m = d * a - m;
    d = (D - m * m) / d;
    a = (a0 + m) / d;
    const mpz_class h_next = a * h + h_prev;
    const mpz_class k_next = a * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  throw std::runtime_error("pell_fundamental: iteration bound exceeded");
}

std::optional<Fundamental> fundamental_solution(std::int64_t A, std::int64_t B) {
  if (A < 1 || B < 1) throw std::invalid_argument("fundamental_solution: A, B must be >= 1");
  if (A == 1) return Fundamental{1, 0};  // degenerate: a = 1, b = 0
  if (std::gcd(A, B) != 1) return std::nullopt;  // Aa^2 - Bb^2 = 1 needs coprime A, B
  const mpz_class D = mpz_class(A) * B;
  if (is_square(D)) {
    // square discriminant: (Aa - cb)(Aa + cb) = A, so enumerate positive
    // divisor pairs d1*d2 = A exactly; no Pell unit exists in this case
    const mpz_class c = isqrt(D);
    std::optional<Fundamental> best;
    for (std::int64_t d1 = 1; static_cast<__int128>(d1) * d1 <= A; ++d1) {
      if (A % d1 != 0) continue;
      const std::int64_t d2 = A / d1;
      const mpz_class sum = mpz_class(d1) + d2;
      const mpz_class diff = mpz_class(d2) - d1;
      if (sum % 2 != 0 || diff % 2 != 0) continue;
      const mpz_class Aa = sum / 2;
      const mpz_class cb = diff / 2;
      if (Aa % A != 0 || cb % c != 0) continue;
      const mpz_class a = Aa / A;
      const mpz_class b = cb / c;
      if (a < 1 || b < 1) continue;
      if (A * a * a - B * b * b != 1) continue;
      if (!best || a < best->a0) best = Fundamental{a, b};
    }
    return best;
  }
  const Fundamental unit = pell_fundamental(D);  // u^2 - AB v^2 = 1
  // A*a^2 - B*b^2 = 1 is solvable iff u+1 = 2A a0^2 and u-1 = 2B b0^2
  const mpz_class up = unit.a0 + 1;
  const mpz_class um = unit.a0 - 1;
  if (up % (2 * A) != 0 || um % (2 * B) != 0) return std::nullopt;
  const mpz_class a2 = up / (2 * A);
  const mpz_class b2 = um / (2 * B);
  if (!is_square(a2) || !is_square(b2)) return std::nullopt;
  Fundamental f{isqrt(a2), isqrt(b2)};
  if (A * f.a0 * f.a0 - B * f.b0 * f.b0 != 1)
    throw std::logic_error("fundamental_solution: criterion produced a non-solution");
  return f;
}

ReductionResult to_canonical(std::int64_t A, std::int64_t B) {
  ReductionResult res;
  res.A = A;
  res.B = B;
  res.fundamental = fundamental_solution(A, B);
  res.solvable = res.fundamental.has_value();
  if (res.solvable) {
    const mpz_class t_from_B = B * res.fundamental->b0 * res.fundamental->b0;
    const mpz_class t_from_A = A * res.fundamental->a0 * res.fundamental->a0 - 1;
    if (t_from_A != t_from_B) throw std::logic_error("to_canonical: inconsistent t");
    res.t = t_from_B;
    res.degenerate = t_from_B < 1;
  }
  return res;
}

std::vector<std::pair<mpz_class, mpz_class>> brute_force_quartic(std::int64_t A, std::int64_t B,
                                                                 std::int64_t x_bound) {
  if (A < 1 || B < 1 || x_bound < 1) throw std::invalid_argument("brute_force_quartic: bad arguments");
  std::vector<std::pair<mpz_class, mpz_class>> out;
  for (std::int64_t x = 1; x <= x_bound; ++x) {
    const mpz_class x2 = mpz_class(x) * x;
    const mpz_class num = A * x2 * x2 - 1;
    if (num <= 0 || num % B != 0) continue;
    const mpz_class y2 = num / B;
    const SqrtResult r = integer_sqrt(y2);
    if (r.exact && r.root >= 1) out.emplace_back(x, r.root);
  }
  return out;
}

std::vector<std::int64_t> brute_force_index(const EquationParams& params, std::int64_t n_bound) {
  if (n_bound < 1) throw std::invalid_argument("brute_force_index: n_bound must be >= 1");
  std::vector<std::int64_t> out;
  AlphaPower state = alpha_power_exact(params, 1);
  const AlphaPower step = alpha_power_exact(params, 2);
  for (std::int64_t n = 1; n <= n_bound; n += 2) {
    if (integer_sqrt(state.p).exact) out.push_back(n);
    state = pair_multiply(state, step);
  }
  return out;
}

}  // namespace qs
