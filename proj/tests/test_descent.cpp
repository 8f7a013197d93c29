#include <algorithm>
#include <set>
#include <vector>

#include <doctest.h>

#include "qs/descent.hpp"
#include "qs/report.hpp"

using namespace qs;

namespace {

// expected names, in chain order, of the t = 2 certificate checks
const std::vector<std::string> kChainCheckNames = {
    "modulus_divides_q6b",  "pn_equiv_p8bm1_mod_q6b", "p8bm1_identity",
    "pn_equiv_pb_minus_2qb_mod_n",  "modulus_3_mod_8", "odd_step_identities",
    "jacobi_chain_0", "jacobi_chain_1", "jacobi_chain_2", "jacobi_chain_3",
    "jacobi_chain_4", "jacobi_chain_5", "jacobi_chain_6", "jacobi_chain_7",
    "jacobi_chain_final", "jacobi_value_minus_one"};

mpz_class p_value_t2(std::int64_t k) { return alpha_power_exact(EquationParams{2}, k).p; }

}  // namespace

TEST_SUITE("descent") {

TEST_CASE("offset decomposition: frozen examples") {
  const OffsetDecomposition d841 = decompose(841);
  CHECK(d841.w == 1);
  CHECK(d841.c == 1);
  CHECK(d841.d == 8);
  CHECK(d841.a == 40);
  CHECK(d841.b == 21);
  CHECK(d841.m_a == 2);

  const OffsetDecomposition dm839 = decompose(-839);
  CHECK(dm839.w == -1);
  CHECK(dm839.c == 1);
  CHECK(dm839.d == -8);
  CHECK(dm839.a == -8);
  CHECK(dm839.b == 105);

  const OffsetDecomposition dm7559 = decompose(-7559);  // w = -9, c = 3
  CHECK(dm7559.c == 3);
  CHECK(dm7559.b == 945);
}

TEST_CASE("offset decomposition: exhaustive invariants for |w| <= 1190") {
  for (std::int64_t w = -1190; w <= 1190; ++w) {
    if (w == 0) continue;
    const std::int64_t n = 1 + 840 * w;
    const OffsetDecomposition dec = decompose(n);
    CHECK(dec.w == w);
    CHECK(mpz_class(dec.a) * dec.b == mpz_class(840) * w);
    CHECK(((dec.a % 24) + 24) % 24 == 16);
    CHECK(dec.a == 24 * dec.m_a - 8);
    CHECK(dec.b > 0);
    CHECK(dec.b % 2 == 1);
    CHECK(dec.b % 3 == 0);
    CHECK(dec.b % 4 == 1);
    CHECK(dec.c >= 1);
    CHECK(dec.d % 3 != 0);
    const std::int64_t dm = ((dec.d % 24) + 24) % 24;
    CHECK((dm == 8 || dm == 16));
  }
}

TEST_CASE("offset decomposition rejects values outside its domain") {
  CHECK_THROWS_AS(decompose(1), std::invalid_argument);
  CHECK_THROWS_AS(decompose(0), std::invalid_argument);
  CHECK_THROWS_AS(decompose(842), std::invalid_argument);
  CHECK_THROWS_AS(decompose(-841), std::invalid_argument);
}

TEST_CASE("class-1 witness modulus 2*P_b + 1") {
  CHECK(witness_modulus_t2(1) == 3);
  CHECK(witness_modulus_t2(3) == 19);
  CHECK(witness_modulus_t2(5) == 179);
}

TEST_CASE("descent chain at n = 841: every check passes and is named") {
  const DescentCertificate cert = verify_chain_t2(841);
  CHECK(cert.valid());
  CHECK(cert.jacobi_value == -1);
  CHECK(cert.witness_modulus == 2 * p_value_t2(21) + 1);
  REQUIRE(cert.chain.size() == kChainCheckNames.size());
  for (std::size_t i = 0; i < cert.chain.size(); ++i) {
    CHECK(cert.chain[i].name == kChainCheckNames[i]);
    CHECK(cert.chain[i].pass);
  }
}

TEST_CASE("descent chain accepts negative indices") {
  const DescentCertificate cert = verify_chain_t2(-839);
  CHECK(cert.valid());
  CHECK(cert.jacobi_value == -1);
  CHECK(cert.decomposition.b == 105);
}

TEST_CASE("descent chain over all |w| <= 50: valid, symbol -1, b capped at 945") {
  std::int64_t largest_b = 0;
  std::set<std::int64_t> b_values;
  for (std::int64_t w = -50; w <= 50; ++w) {
    if (w == 0) continue;
    const DescentCertificate cert = verify_chain_t2(1 + 840 * w);
    CHECK(cert.valid());
    CHECK(cert.jacobi_value == -1);
    largest_b = std::max(largest_b, cert.decomposition.b);
    b_values.insert(cert.decomposition.b);
  }
  CHECK(largest_b == 945);
  CHECK(b_values == std::set<std::int64_t>{9, 21, 45, 81, 105, 189, 405, 945});
}

TEST_CASE("polynomial witness agrees with the chain for the 2x + 1 member") {
  const Poly two_x_plus_one{0, 2, 1};
  for (std::int64_t w = -10; w <= 10; ++w) {
    if (w == 0) continue;
    const std::int64_t n = 1 + 840 * w;
    const OffsetDecomposition dec = decompose(n);
    const int value = jacobi_witness(EquationParams{2}, n, two_x_plus_one, dec.b);
    CHECK(value == verify_chain_t2(n).jacobi_value);
    CHECK(value == -1);
  }
}

TEST_CASE("mod-8 obstruction enumeration holds") { CHECK(check_class3_obstruction()); }

TEST_CASE("class +-3 reduction: nested descent subcase") {
  const ReducedClaim claim = reduce_class3(EquationParams{2}, 2523);
  CHECK(claim.k == 841);
  CHECK(claim.k_normalized == 841);
  CHECK(claim.k_mod_840 == 1);
  CHECK(claim.subcase == ReducedClaim::Subcase::class1_descent);
  REQUIRE(claim.class1_certificate.has_value());
  CHECK(claim.class1_certificate->valid());
  CHECK(claim.product_matches);
  CHECK(claim.valid());

  const ReducedClaim negk = reduce_class3(EquationParams{2}, 2517);
  CHECK(negk.k == 839);
  CHECK(negk.k_normalized == -839);
  CHECK(negk.k_mod_840 == 1);
  CHECK(negk.valid());
}

TEST_CASE("class +-3 reduction: sieve-eliminated subcases") {
  const ReducedClaim c281 = reduce_class3(EquationParams{2}, 843);
  CHECK(c281.k == 281);
  CHECK(c281.k_mod_840 == 281);
  CHECK(c281.subcase == ReducedClaim::Subcase::sieve_eliminated);
  CHECK(c281.valid());

  const ReducedClaim c561 = reduce_class3(EquationParams{2}, 1683);
  CHECK(c561.k == 561);
  CHECK(c561.k_mod_840 == 561);
  CHECK(c561.valid());

  const ReducedClaim flip = reduce_class3(EquationParams{2}, 5877);
  CHECK(flip.k == 1959);
  CHECK(flip.k_normalized == -1959);
  CHECK(flip.k_mod_840 == 561);
  CHECK(flip.valid());
}

TEST_CASE("class +-3 reduction rejects out-of-class input") {
  CHECK_THROWS_AS(reduce_class3(EquationParams{2}, 845), std::invalid_argument);
  CHECK_THROWS_AS(reduce_class3(EquationParams{2}, 3), std::invalid_argument);
  CHECK_THROWS_AS(reduce_class3(EquationParams{2}, -3), std::invalid_argument);
}

TEST_CASE("end-to-end run to 10000: verdict, coverage, and certificate census") {
  ProveOptions opt;
  opt.jobs = 8;
  const ProofReport rep = prove_t2(10000, opt);
  CHECK(rep.all_valid);
  CHECK(rep.verdict == "only n ∈ {±1, ±3}");
  CHECK(rep.largest_b == 945);
  CHECK(rep.sieve.converged);

  // candidate coverage: exactly the odd 5 <= n <= 10000 in surviving classes
  std::vector<std::int64_t> expected;
  for (std::int64_t n = 5; n <= 10000; n += 2) {
    const std::int64_t rm = n % 840;
    if (rm == 1 || rm == 3 || rm == 837 || rm == 839) expected.push_back(n);
  }
  REQUIRE(rep.entries.size() == expected.size());
  CHECK(rep.entries.size() == 44);
  std::size_t certificates = 0, claims = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const ProofEntry& e = rep.entries[i];
    CHECK(e.n == expected[i]);
    CHECK(e.valid);
    if (e.certificate) ++certificates;
    if (e.claim) {
      ++claims;
      // sieve-eliminated inner classes carry the witness attached from the run
      if (e.claim->subcase == ReducedClaim::Subcase::sieve_eliminated)
        CHECK(e.claim->sieve_witness.has_value());
    }
  }
  CHECK(certificates == 22);
  CHECK(claims == 22);
}

TEST_CASE("end-to-end run is independent of the worker count") {
  ProveOptions serial;
  serial.jobs = 1;
  ProveOptions parallel;
  parallel.jobs = 8;
  CHECK(proof_report_json(prove_t2(3000, serial)) == proof_report_json(prove_t2(3000, parallel)));
}

TEST_CASE("end-to-end run rejects bounds below the first candidate") {
  CHECK_THROWS_AS(prove_t2(840), std::invalid_argument);
}

}  // TEST_SUITE
