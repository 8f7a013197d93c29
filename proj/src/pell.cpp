#include "qs/pell.hpp"

#include <bit>

namespace qs {

namespace {

std::uint64_t abs_index(std::int64_t k) {
  if (k == INT64_MIN) throw std::invalid_argument("index out of range");
  return static_cast<std::uint64_t>(k < 0 ? -k : k);
}

void check_modulus(const mpz_class& n) {
  if (n < 3 || mpz_even_p(n.get_mpz_t()))
    throw std::invalid_argument("modulus must be odd and >= 3");
}

}  // namespace

AlphaPower pair_multiply(const AlphaPower& x, const AlphaPower& y) {
  if (x.t != y.t) throw std::invalid_argument("pair_multiply: mismatched t");
  const mpz_class t(x.t);
  AlphaPower out;
  out.t = x.t;
  out.k = x.k + y.k;
  const bool xo = x.parity() == Parity::odd;
  const bool yo = y.parity() == Parity::odd;
  if (xo && yo) {
    out.p = (t + 1) * x.p * y.p + t * x.q * y.q;
    out.q = x.p * y.q + x.q * y.p;
  } else if (!xo && !yo) {
    out.p = x.p * y.p + t * (t + 1) * x.q * y.q;
    out.q = x.p * y.q + x.q * y.p;
  } else {
    const AlphaPower& o = xo ? x : y;
    const AlphaPower& e = xo ? y : x;
    out.p = o.p * e.p + t * o.q * e.q;
    out.q = o.q * e.p + (t + 1) * o.p * e.q;
  }
  return out;
}

ModPair pair_multiply(const ModPair& x, const ModPair& y) {
  if (x.t != y.t) throw std::invalid_argument("pair_multiply: mismatched t");
  if (x.modulus != y.modulus) throw std::invalid_argument("pair_multiply: mismatched modulus");
  const mpz_class& N = x.modulus;
  const mpz_class t = mpz_class(x.t) % N;
  ModPair out;
  out.t = x.t;
  out.modulus = N;
  const bool xo = x.parity == Parity::odd;
  const bool yo = y.parity == Parity::odd;
  if (xo && yo) {
    out.p = ((t + 1) * x.p * y.p + t * x.q * y.q) % N;
    out.q = (x.p * y.q + x.q * y.p) % N;
    out.parity = Parity::even;
  } else if (!xo && !yo) {
    out.p = (x.p * y.p + t * (t + 1) * x.q * y.q) % N;
    out.q = (x.p * y.q + x.q * y.p) % N;
    out.parity = Parity::even;
  } else {
    const ModPair& o = xo ? x : y;
    const ModPair& e = xo ? y : x;
    out.p = (o.p * e.p + t * o.q * e.q) % N;
    out.q = (o.q * e.p + (t + 1) * o.p * e.q) % N;
    out.parity = Parity::odd;
  }
  return out;
}

AlphaPower alpha_power_exact(const EquationParams& params, std::int64_t k) {
  const std::uint64_t e = abs_index(k);
  AlphaPower acc{params.t, 0, 1, 0};
  const AlphaPower base{params.t, 1, 1, 1};
  if (e != 0) {
    for (int bit = 63 - std::countl_zero(e); bit >= 0; --bit) {
      acc = pair_multiply(acc, acc);
      if ((e >> bit) & 1) acc = pair_multiply(acc, base);
    }
  }
  if (k < 0) {
    acc.k = k;
    acc.q = -acc.q;
  }
  return acc;
}

ModPair alpha_power_mod(const EquationParams& params, std::int64_t k, const mpz_class& modulus) {
  check_modulus(modulus);
  const std::uint64_t e = abs_index(k);
  ModPair acc{params.t, modulus, 1, 0, Parity::even};
  const ModPair base{params.t, modulus, 1, 1, Parity::odd};
  if (e != 0) {
    for (int bit = 63 - std::countl_zero(e); bit >= 0; --bit) {
      acc = pair_multiply(acc, acc);
      if ((e >> bit) & 1) acc = pair_multiply(acc, base);
    }
  }
  if (k < 0 && acc.q != 0) acc.q = modulus - acc.q;
  return acc;
}

int jacobi(const mpz_class& a, const mpz_class& n) {
  if (n < 1 || mpz_even_p(n.get_mpz_t()))
    throw std::invalid_argument("jacobi: modulus must be odd and positive");
  return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

SqrtResult integer_sqrt(const mpz_class& n) {
  if (n < 0) throw std::invalid_argument("integer_sqrt: negative input");
  SqrtResult out;
  mpz_class rem;
  mpz_sqrtrem(out.root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  out.exact = rem == 0;
  return out;
}

std::pair<mpz_class, mpz_class> triple_index_factor(const EquationParams& params, std::int64_t k) {
  if (k % 2 == 0) throw std::invalid_argument("triple_index_factor: k must be odd");
  const AlphaPower a = alpha_power_exact(params, k);
  const mpz_class t(params.t);
  mpz_class cofactor = (t + 1) * a.p * a.p + 3 * t * a.q * a.q;
  return {a.p, cofactor};
}

}  // namespace qs
