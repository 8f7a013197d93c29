#include "qs/descent.hpp"

#include <algorithm>

#include "qs/parallel.hpp"

namespace qs {

namespace {

mpz_class mod_nonneg(const mpz_class& a, const mpz_class& n) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

}  // namespace

OffsetDecomposition decompose(std::int64_t n) {
  if (n == 1) throw std::invalid_argument("decompose: n = 1 is the trivial index");
  if (floor_mod(n - 1, 840) != 0) throw std::invalid_argument("decompose: n must be = 1 (mod 840)");
  OffsetDecomposition out;
  out.n = n;
  out.w = (n - 1) / 840;
  // c = ord_3(840w) = 1 + ord_3(w)
  out.c = 1;
  std::int64_t v = out.w < 0 ? -out.w : out.w;
  while (v % 3 == 0) {
    v /= 3;
    ++out.c;
  }
  std::int64_t pow3c = 1;
  for (unsigned i = 0; i < out.c; ++i) pow3c *= 3;  // 3^c <= 3|w|, no overflow
  out.d = static_cast<std::int64_t>(static_cast<__int128>(24) * out.w / pow3c);
  const std::int64_t dm = floor_mod(out.d, 24);  // 8 or 16: d is 8*odd', coprime to 3
  const bool c_even = out.c % 2 == 0;
  std::int64_t b_unit;
  if (dm == 8 && c_even) {
    out.a = 35 * out.d;
    b_unit = 1;
  } else if (dm == 16 && c_even) {
    out.a = 7 * out.d;
    b_unit = 5;
  } else if (dm == 8 && !c_even) {
    out.a = 5 * out.d;
    b_unit = 7;
  } else if (dm == 16 && !c_even) {
    out.a = out.d;
    b_unit = 35;
  } else {
    throw std::logic_error("decompose: d not in {8, 16} mod 24");
  }
  out.b = b_unit * pow3c;
  out.m_a = (out.a + 8) / 24;
  // invariants of the table; violations would be construction bugs
  if (static_cast<__int128>(out.a) * out.b != static_cast<__int128>(840) * out.w ||
      floor_mod(out.a, 24) != 16 || out.b <= 0 || out.b % 3 != 0 || floor_mod(out.b, 4) != 1 ||
      out.a != 24 * out.m_a - 8)
    throw std::logic_error("decompose: invariant violation");
  return out;
}

mpz_class witness_modulus_t2(std::int64_t b) {
  if (b < 1 || b % 2 == 0) throw std::invalid_argument("witness_modulus_t2: b must be odd positive");
  return 2 * alpha_power_exact(EquationParams(2), b).p + 1;
}

int jacobi_witness(const EquationParams& params, std::int64_t n, const Poly& poly, std::int64_t b) {
  if (n % 2 == 0) throw std::invalid_argument("jacobi_witness: n must be odd");
  const mpz_class pb = alpha_power_exact(params, b).p;
  mpz_class N = poly.eval(pb);
  if (N < 0) N = -N;  // symbols mod N and mod -N agree for our purposes
  if (N < 3 || mpz_even_p(N.get_mpz_t()))
    throw std::invalid_argument("jacobi_witness: poly(P_b) must be odd with |value| >= 3");
  const ModPair pn = alpha_power_mod(params, n, N);
  return jacobi(pn.p, N);
}

bool DescentCertificate::valid() const {
  return jacobi_value == -1 &&
         std::all_of(chain.begin(), chain.end(), [](const ChainCheck& c) { return c.pass; });
}

DescentCertificate verify_chain_t2(std::int64_t n) {
  const EquationParams t2(2);
  DescentCertificate cert;
  cert.t = 2;
  cert.n = n;
  cert.decomposition = decompose(n);
  const std::int64_t b = cert.decomposition.b;
  const std::int64_t r = (b - 1) / 2;  // even: b = 1 (mod 4)

  const AlphaPower ab = alpha_power_exact(t2, b);
  const AlphaPower ar = alpha_power_exact(t2, r);
  const AlphaPower a6b = alpha_power_exact(t2, 6 * b);
  const AlphaPower a8b = alpha_power_exact(t2, 8 * b);
  const AlphaPower a8bm1 = alpha_power_exact(t2, 8 * b - 1);
  const AlphaPower an = alpha_power_exact(t2, n);

  const mpz_class N = 2 * ab.p + 1;
  cert.witness_modulus = N;
  auto push = [&cert](const char* name, bool pass) { cert.chain.push_back({name, pass}); };

  // (i) N divides Q_{6b} (N = 2P_b+1 is a factor of Q_{6b}/Q_{2b})
  push("modulus_divides_q6b", mod_nonneg(a6b.q, N) == 0);
  // (ii) P_n = P_{1-8b} = P_{8b-1} mod Q_{6b}: the index gap n - (1-8b) =
  // 24*m_a*b is an even shift whose Q-modulus is divisible by Q_{6b}
  push("pn_equiv_p8bm1_mod_q6b", mod_nonneg(an.p - a8bm1.p, a6b.q) == 0);
  // (iii) P_{8b-1} = P_{8b} - 2*Q_{8b} exactly
  push("p8bm1_identity", a8bm1.p == a8b.p - 2 * a8b.q);
  // (iv) the same residue by direct modular powering: P_n = P_b - 2*Q_b mod N
  const mpz_class pn_mod = alpha_power_mod(t2, n, N).p;
  push("pn_equiv_pb_minus_2qb_mod_n", pn_mod == mod_nonneg(ab.p - 2 * ab.q, N));
  // (v) N = 3 (mod 8), so (2/N) = -1 drives the chain's sign flips
  push("modulus_3_mod_8", mod_nonneg(N, 8) == 3);
  // (vi) odd-step identities at b = 2r+1 (t = 2)
  const mpz_class core = 2 * ar.p * ar.p - 1;
  push("odd_step_identities",
       r % 2 == 0 && ab.p == core + 4 * ar.p * ar.q && ab.q == core + 6 * ar.p * ar.q);

  // (vii) the Jacobi chain, each equality checked as evaluated symbols
  const mpz_class M2 = 8 * ar.p * ar.q - 1;  // second modulus, = 7 (mod 8)
  const int s0 = jacobi(pn_mod, N);
  const int s1 = jacobi(ab.p - 2 * ab.q, N);
  const int s2 = -jacobi(2 * ab.p - 4 * ab.q, N);
  const int s3 = -jacobi(-1 - 4 * ab.q, N);
  const int s4 = jacobi(4 * ab.q + 1, N);
  const int s5 = jacobi(8 * ar.p * ar.p + 24 * ar.p * ar.q - 3, 4 * ar.p * ar.p + 8 * ar.p * ar.q - 1);
  const int s6 = jacobi(M2, N);
  const int s7 = -jacobi(4 * ar.p * ar.p + 8 * ar.p * ar.q - 1, M2);
  const int s8 = -jacobi(4 * ar.p * ar.p, M2);
  const int steps[] = {s0, s1, s2, s3, s4, s5, s6, s7, s8};
  for (int i = 0; i + 1 < 9; ++i) {
    std::string name = "jacobi_chain_" + std::to_string(i);
    cert.chain.push_back({name, steps[i] == steps[i + 1]});
  }
  // (viii) the closing value: (4P_r^2 / M2) = +1 since gcd(2P_r, M2) = 1
  push("jacobi_chain_final", s8 == -1);
  cert.jacobi_value = s0;
  push("jacobi_value_minus_one", s0 == -1);
  return cert;
}

bool check_class3_obstruction() {
  // P = 1 (mod 8) and Q odd: is P^2 + 2Q^2 ever a square mod 8?
  for (int q = 1; q < 8; q += 2) {
    const int v = (1 * 1 + 2 * q * q) % 8;
    if (v == 0 || v == 1 || v == 4) return false;  // squares mod 8
  }
  return true;
}

bool ReducedClaim::valid() const {
  if (!product_matches || !obstruction_holds) return false;
  if (floor_mod(k_normalized, 280) != 1) return false;
  if (subcase == Subcase::class1_descent)
    return class1_certificate.has_value() && class1_certificate->valid();
  return k_mod_840 == 281 || k_mod_840 == 561;
}

ReducedClaim reduce_class3(const EquationParams& params, std::int64_t n) {
  const std::int64_t rm = floor_mod(n, 840);
  if (rm != 3 && rm != 837) throw std::invalid_argument("reduce_class3: n must be = +-3 (mod 840)");
  if (n == 3 || n == -3) throw std::invalid_argument("reduce_class3: |n| = 3 is a known solution index");
  ReducedClaim claim;
  claim.t = params.t;
  claim.n = n;
  claim.k = n / 3;
  claim.k_normalized = floor_mod(claim.k, 280) == 1 ? claim.k : -claim.k;
  claim.k_mod_840 = floor_mod(claim.k_normalized, 840);
  auto [f1, f2] = triple_index_factor(params, claim.k);
  claim.factor1 = f1;
  claim.factor2 = f2;
  claim.product_matches = f1 * f2 == alpha_power_exact(params, n).p;
  claim.obstruction_holds = check_class3_obstruction();
  if (claim.k_mod_840 == 1) {
    claim.subcase = ReducedClaim::Subcase::class1_descent;
    if (params.t == 2) claim.class1_certificate = verify_chain_t2(claim.k_normalized);
  } else {
    claim.subcase = ReducedClaim::Subcase::sieve_eliminated;
  }
  return claim;
}

ProofReport prove_t2(std::int64_t n_bound, const ProveOptions& options) {
  if (n_bound < 841) throw std::invalid_argument("prove_t2: n_bound must be >= 841");
  ProofReport report;
  report.n_bound = n_bound;
  report.sieve = escalate(2, 840, options.max_r, options.max_s, options.prime_bound,
                          options.cache, options.jobs);

  std::vector<std::int64_t> candidates;
  for (std::int64_t n = 5; n <= n_bound; n += 2) {
    const std::int64_t rm = floor_mod(n, 840);
    if (rm == 1 || rm == 3 || rm == 837 || rm == 839) candidates.push_back(n);
  }
  report.entries.resize(candidates.size());
  parallel_for(candidates.size(), options.jobs, [&](std::size_t i) {
    const std::int64_t n = candidates[i];
    const std::int64_t rm = floor_mod(n, 840);
    ProofEntry& entry = report.entries[i];
    entry.n = n;
    entry.residue_mod_840 = rm;
    if (rm == 1 || rm == 839) {
      // P_{-n} = P_n lets the negative representative carry class 839
      entry.certificate = verify_chain_t2(rm == 1 ? n : -n);
      entry.valid = entry.certificate->valid();
    } else {
      entry.claim = reduce_class3(EquationParams(2), n);
      entry.valid = entry.claim->valid();
    }
  });

  // Attach the sieve witness that eliminates each class-3 inner index, and
  // require it to exist: the claim's k class must actually be dead.
  const std::uint64_t M = report.sieve.fb.M;
  for (ProofEntry& entry : report.entries) {
    if (!entry.claim) continue;
    ReducedClaim& claim = *entry.claim;
    if (claim.subcase != ReducedClaim::Subcase::sieve_eliminated) continue;
    const std::uint64_t j =
        static_cast<std::uint64_t>(floor_mod(claim.k_normalized, static_cast<std::int64_t>(M)));
    auto it = report.sieve.outcome.witnesses.find(j);
    if (it != report.sieve.outcome.witnesses.end()) {
      claim.sieve_witness = {it->first, it->second};
    } else {
      entry.valid = false;  // sieve failed to cover the referred class
    }
  }

  for (const ProofEntry& entry : report.entries) {
    const DescentCertificate* cert = entry.certificate ? &*entry.certificate
                                     : entry.claim && entry.claim->class1_certificate
                                         ? &*entry.claim->class1_certificate
                                         : nullptr;
    if (cert) report.largest_b = std::max(report.largest_b, cert->decomposition.b);
  }
  report.all_valid = report.sieve.converged &&
                     std::all_of(report.entries.begin(), report.entries.end(),
                                 [](const ProofEntry& e) { return e.valid; });
  report.verdict = report.all_valid ? "only n ∈ {±1, ±3}" : "incomplete: unresolved index classes remain";
  return report;
}

}  // namespace qs
