#include "properties.hpp"

#include <random>
#include <sstream>

#include "qs/pell.hpp"

namespace qs::props {
namespace {

mpz_class mod_nonneg(const mpz_class& v, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

void record(Outcome& o, bool ok, const char* prop, std::int64_t t, std::int64_t k) {
  ++o.cases;
  if (ok) return;
  ++o.failures;
  if (o.first_failure.empty()) {
    std::ostringstream s;
    s << prop << " failed at t=" << t << " k=" << k;
    o.first_failure = s.str();
  }
}

// deterministic draw in [lo, hi]
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 acc = 1, base = b % m;
  while (e) {
    if (e & 1) acc = acc * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

Outcome pell_identity() {
  Outcome o;
  std::mt19937_64 rng(0x5e11);
  for (int it = 0; it < 240; ++it) {
    const std::int64_t t = draw(rng, 1, 50);
    const std::int64_t k = draw(rng, -500, 500);
    const AlphaPower a = alpha_power_exact(EquationParams{t}, k);
    const bool ok = a.parity() == Parity::odd
                        ? (t + 1) * a.p * a.p - t * a.q * a.q == 1
                        : a.p * a.p - t * (t + 1) * a.q * a.q == 1;
    record(o, ok, "pell_identity", t, k);
  }
  return o;
}

Outcome shift_congruence() {
  Outcome o;
  std::mt19937_64 rng(0x5417);
  for (int it = 0; it < 240; ++it) {
    const std::int64_t t = draw(rng, 1, 20);
    const std::int64_t n = 2 * draw(rng, -100, 99) + 1;
    const std::int64_t k = 2 * draw(rng, 1, 100);
    const EquationParams params{t};
    const mpz_class qk = alpha_power_exact(params, k).q;
    const mpz_class lhs = alpha_power_exact(params, n + 2 * k).p;
    const mpz_class rhs = alpha_power_exact(params, n).p;
    record(o, mod_nonneg(lhs - rhs, qk) == 0, "shift_congruence", t, n);
  }
  return o;
}

Outcome q_divisibility() {
  Outcome o;
  std::mt19937_64 rng(0x0d1f);
  for (int it = 0; it < 240; ++it) {
    const std::int64_t t = draw(rng, 1, 30);
    const std::int64_t k = 2 * draw(rng, 0, 99) + 1;
    const EquationParams params{t};
    const mpz_class q2 = alpha_power_exact(params, 2 * k).q;
    const mpz_class q6 = alpha_power_exact(params, 6 * k).q;
    record(o, q6 % q2 == 0, "q_divisibility", t, k);
  }
  return o;
}

Outcome sextic_identity_t2() {
  Outcome o;
  std::mt19937_64 rng(0x6e6e);
  const EquationParams params{2};
  for (int it = 0; it < 240; ++it) {
    const std::int64_t k = 2 * draw(rng, 0, 249) + 1;
    const mpz_class p = alpha_power_exact(params, k).p;
    const mpz_class q2 = alpha_power_exact(params, 2 * k).q;
    const mpz_class q6 = alpha_power_exact(params, 6 * k).q;
    const bool ok = q6 == q2 * 3 * (4 * p * p - 1) * (12 * p * p - 1);
    record(o, ok, "sextic_identity_t2", 2, k);
  }
  return o;
}

Outcome sextic_quotients() {
  Outcome o;
  for (std::int64_t t = 1; t <= 30; ++t) {
    const EquationParams params{t};
    for (std::int64_t k = 1; k <= 49; k += 2) {
      const mpz_class p = alpha_power_exact(params, k).p;
      const mpz_class p2 = alpha_power_exact(params, 2 * k).p;
      const mpz_class p6 = alpha_power_exact(params, 6 * k).p;
      const mpz_class q2 = alpha_power_exact(params, 2 * k).q;
      const mpz_class q6 = alpha_power_exact(params, 6 * k).q;
      const mpz_class base = 16 * (t + 1) * (t + 1) * p * p * p * p - 16 * (t + 1) * p * p;
      const bool ok = p6 % p2 == 0 && q6 % q2 == 0 && p6 / p2 == base + 1 && q6 / q2 == base + 3;
      record(o, ok, "sextic_quotients", t, k);
    }
  }
  return o;
}

Outcome divisor_fact_t2() {
  Outcome o;
  std::mt19937_64 rng(0xd1f0);
  const EquationParams params{2};
  for (int it = 0; it < 240; ++it) {
    const std::int64_t k = 2 * draw(rng, 0, 249) + 1;
    const mpz_class p = alpha_power_exact(params, k).p;
    const mpz_class q6 = alpha_power_exact(params, 6 * k).q;
    record(o, q6 % (2 * p + 1) == 0, "divisor_fact_t2", 2, k);
  }
  return o;
}

Outcome residue_mod8_t2() {
  Outcome o;
  const EquationParams params{2};
  for (std::int64_t k = -999; k <= 999; k += 2)
    record(o, mod_nonneg(alpha_power_exact(params, k).p, 8) == 1, "residue_mod8_t2", 2, k);
  return o;
}

Outcome triple_index() {
  Outcome o;
  std::mt19937_64 rng(0x3333);
  for (int it = 0; it < 240; ++it) {
    const std::int64_t t = draw(rng, 1, 30);
    const std::int64_t k = 2 * draw(rng, 0, 166) + 1;
    const EquationParams params{t};
    const AlphaPower a = alpha_power_exact(params, k);
    const mpz_class cofactor = (t + 1) * a.p * a.p + 3 * t * a.q * a.q;
    const mpz_class p3 = alpha_power_exact(params, 3 * k).p;
    const auto [f1, f2] = triple_index_factor(params, k);
    record(o, p3 == a.p * cofactor && f1 == a.p && f2 == cofactor, "triple_index", t, k);
  }
  return o;
}

Outcome negative_index() {
  Outcome o;
  std::mt19937_64 rng(0x9e91);
  for (int it = 0; it < 240; ++it) {
    const std::int64_t t = draw(rng, 1, 50);
    const std::int64_t k = draw(rng, 1, 400);
    const EquationParams params{t};
    const AlphaPower pos = alpha_power_exact(params, k);
    const AlphaPower neg = alpha_power_exact(params, -k);
    record(o, neg.p == pos.p && neg.q == -pos.q && neg.parity() == pos.parity(),
           "negative_index", t, k);
  }
  return o;
}

Outcome mod_exact_agreement() {
  Outcome o;
  std::mt19937_64 rng(0xa93e);
  for (int it = 0; it < 240; ++it) {
    const std::int64_t t = draw(rng, 1, 30);
    const std::int64_t k = draw(rng, -400, 400);
    const mpz_class modulus = 2 * draw(rng, 1, 500000000) + 1;
    const EquationParams params{t};
    const ModPair m = alpha_power_mod(params, k, modulus);
    const AlphaPower e = alpha_power_exact(params, k);
    const bool ok = m.p == mod_nonneg(e.p, modulus) && m.q == mod_nonneg(e.q, modulus) &&
                    m.parity == e.parity();
    record(o, ok, "mod_exact_agreement", t, k);
  }
  return o;
}

Outcome jacobi_oracle() {
  Outcome o;
  for (std::int64_t n = 1; n <= 199; n += 2) {
    for (std::int64_t a = 0; a < n; ++a) {
      // brute force: multiply Legendre symbols over the factorization of n,
      // each computed by Euler's criterion
      int expected = 1;
      std::int64_t rem = n;
      for (std::int64_t p = 3; rem > 1; p += 2) {
        while (rem % p == 0) {
          rem /= p;
          const std::uint64_t e = powmod_u64(static_cast<std::uint64_t>(a % p),
                                             static_cast<std::uint64_t>((p - 1) / 2),
                                             static_cast<std::uint64_t>(p));
          const int leg = e == 0 ? 0 : (e == 1 ? 1 : -1);
          expected *= leg;
        }
      }
      const int got = jacobi(mpz_class(a), mpz_class(n));
      record(o, got == expected, "jacobi_oracle", n, a);
    }
  }
  return o;
}

Outcome isqrt_oracle() {
  Outcome o;
  std::mt19937_64 rng(0x159f);
  for (int it = 0; it < 100000; ++it) {
    mpz_class v = 0;
    const int words = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < words; ++i) v = (v << 64) | mpz_class(static_cast<unsigned long>(rng()));
    switch (it % 4) {
      case 1: v = v * v; break;          // exact square
      case 2: v = v * v + 1; break;      // just above a square
      case 3: if (v > 0) v = v * v - 1; break;  // just below a square
      default: break;
    }
    const SqrtResult r = integer_sqrt(v);
    const bool ok = r.root * r.root <= v && (r.root + 1) * (r.root + 1) > v &&
                    r.exact == (r.root * r.root == v);
    record(o, ok, "isqrt_oracle", it, words);
  }
  return o;
}

const std::vector<NamedProperty>& identity_suite() {
  static const std::vector<NamedProperty> suite{
      {"pell_identity", pell_identity},
      {"shift_congruence", shift_congruence},
      {"q_divisibility", q_divisibility},
      {"sextic_identity_t2", sextic_identity_t2},
      {"sextic_quotients", sextic_quotients},
      {"divisor_fact_t2", divisor_fact_t2},
      {"residue_mod8_t2", residue_mod8_t2},
      {"triple_index", triple_index},
      {"negative_index", negative_index},
      {"mod_exact_agreement", mod_exact_agreement},
  };
  return suite;
}

}  // namespace qs::props
