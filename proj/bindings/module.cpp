#include <cstdint>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qs/ranges.hpp"
#include "qs/report.hpp"

namespace py = pybind11;
using namespace qs;

namespace {

py::int_ to_py(const mpz_class& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.get_str().c_str(), nullptr, 10));
}

mpz_class to_mpz(const py::int_& v) {
  const auto s = py::reinterpret_steal<py::str>(PyObject_Str(v.ptr()));
  return mpz_class(s.cast<std::string>());
}

// Reports keep big integers as decimal strings (same layout as the CLI files).
py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      py::dict d;
      for (const auto& [key, value] : j.items()) d[py::str(key)] = json_to_py(value);
      return d;
    }
    case nlohmann::json::value_t::array: {
      py::list l;
      for (const auto& value : j) l.append(json_to_py(value));
      return l;
    }
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    default:
      return py::none();
  }
}

PolySign sign_of(const std::string& name) {
  if (name == "plus") return PolySign::plus;
  if (name == "minus") return PolySign::minus;
  throw std::invalid_argument("sign must be 'plus' or 'minus'");
}

}  // namespace

PYBIND11_MODULE(quartic, m) {
  m.doc() = "Certified non-square proofs for the family (t+1)X^4 - tY^2 = 1";

  m.def(
      "alpha_power",
      [](std::int64_t t, std::int64_t k) {
        const AlphaPower a = alpha_power_exact(EquationParams{t}, k);
        return py::make_tuple(to_py(a.p), to_py(a.q));
      },
      py::arg("t"), py::arg("k"),
      "Exact pair (P_k, Q_k) of alpha^k, alpha = sqrt(t+1) + sqrt(t)");

  m.def(
      "alpha_power_mod",
      [](std::int64_t t, std::int64_t k, const py::int_& modulus) {
        const ModPair a = alpha_power_mod(EquationParams{t}, k, to_mpz(modulus));
        return py::make_tuple(to_py(a.p), to_py(a.q));
      },
      py::arg("t"), py::arg("k"), py::arg("modulus"),
      "(P_k, Q_k) reduced mod an odd modulus >= 3");

  m.def(
      "jacobi",
      [](const py::int_& a, const py::int_& n) { return jacobi(to_mpz(a), to_mpz(n)); },
      py::arg("a"), py::arg("n"), "Jacobi symbol (a/n) for odd positive n");

  m.def(
      "integer_sqrt",
      [](const py::int_& v) {
        const SqrtResult r = integer_sqrt(to_mpz(v));
        return py::make_tuple(to_py(r.root), r.exact);
      },
      py::arg("v"), "(floor(sqrt(v)), exact) for v >= 0");

  m.def(
      "sieve",
      [](std::int64_t t, std::uint64_t m, unsigned max_r, unsigned max_s,
         std::uint64_t prime_bound, unsigned jobs) {
        nlohmann::json rep;
        {
          py::gil_scoped_release release;
          rep = sieve_report_json(escalate(t, m, max_r, max_s, prime_bound, nullptr, jobs));
        }
        return json_to_py(rep);
      },
      py::arg("t") = 2, py::arg("m") = 840, py::arg("max_r") = 4, py::arg("max_s") = 3,
      py::arg("prime_bound") = 100000, py::arg("jobs") = 1,
      "Escalating congruence sieve; returns the full report as a dict");

  m.def(
      "prove_t2",
      [](std::int64_t n_bound, std::uint64_t prime_bound, unsigned jobs) {
        nlohmann::json rep;
        {
          py::gil_scoped_release release;
          ProveOptions opt;
          opt.prime_bound = prime_bound;
          opt.jobs = jobs;
          rep = proof_report_json(prove_t2(n_bound, opt));
        }
        return json_to_py(rep);
      },
      py::arg("n_bound"), py::arg("prime_bound") = 100000, py::arg("jobs") = 1,
      "Sieve plus certificates for every surviving index class up to n_bound (t = 2)");

  m.def(
      "verify_chain",
      [](std::int64_t n) { return json_to_py(to_json(verify_chain_t2(n))); }, py::arg("n"),
      "Descent certificate for n = 1 (mod 840), |n| > 1, at t = 2");

  m.def(
      "reduce_class3",
      [](std::int64_t n, std::int64_t t) {
        return json_to_py(to_json(reduce_class3(EquationParams{t}, n)));
      },
      py::arg("n"), py::arg("t") = 2, "Reduction of n = +-3 (mod 840) to its inner index");

  m.def(
      "family_poly",
      [](int d, std::int64_t i, const std::string& sign) {
        const Poly p = family_poly(d, i, sign_of(sign));
        return py::make_tuple(to_py(p.c2), to_py(p.c1), to_py(p.c0));
      },
      py::arg("d"), py::arg("i"), py::arg("sign") = "plus",
      "Witness polynomial coefficients (c2, c1, c0) for t = d*i^2 - 1");

  m.def(
      "scan_family",
      [](int d, const std::vector<std::int64_t>& i_values,
         const std::vector<std::int64_t>& w_values, const std::string& sign, unsigned jobs) {
        const PolySign s = sign_of(sign);
        nlohmann::json rep;
        {
          py::gil_scoped_release release;
          rep = scan_report_json(scan_family(d, i_values, w_values, s, jobs));
        }
        return json_to_py(rep);
      },
      py::arg("d"), py::arg("i_values"), py::arg("w_values"), py::arg("sign") = "plus",
      py::arg("jobs") = 1, "Jacobi-symbol scan of one witness family over an (i, w) grid");

  m.def(
      "verify_conjecture31",
      [](std::int64_t i, std::int64_t w) { return json_to_py(to_json(verify_conjecture31(i, w))); },
      py::arg("i"), py::arg("w"),
      "One two-sided identity instance for d = 3, odd i (evidence, not proof)");

  m.def(
      "to_canonical",
      [](std::int64_t A, std::int64_t B) { return json_to_py(reduction_report_json(to_canonical(A, B))); },
      py::arg("A"), py::arg("B"),
      "Map A*x^4 - B*y^2 = 1 to the canonical parameter t, or report unsolvable");

  m.def(
      "brute_force_quartic",
      [](std::int64_t A, std::int64_t B, std::int64_t x_bound) {
        py::list out;
        for (const auto& [x, y] : brute_force_quartic(A, B, x_bound))
          out.append(py::make_tuple(to_py(x), to_py(y)));
        return out;
      },
      py::arg("A"), py::arg("B"), py::arg("x_bound"),
      "All solutions with 1 <= x <= x_bound, by direct search");

  m.def(
      "brute_force_index",
      [](std::int64_t t, std::int64_t n_bound) {
        return brute_force_index(EquationParams{t}, n_bound);
      },
      py::arg("t"), py::arg("n_bound"), "Odd n <= n_bound with P_n a perfect square");

  m.def("parse_range", &parse_range, py::arg("spec"),
        "Expand range syntax like '1..5:odd' into a list");

  m.attr("__version__") = "0.1.0";
}
