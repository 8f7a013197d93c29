#include "qs/conjecture.hpp"

#include "qs/parallel.hpp"

namespace qs {

Poly family_poly(int d, std::int64_t i, PolySign sign) {
  if (i < 1) throw std::invalid_argument("family_poly: i must be >= 1");
  if (i > 3000000000LL) throw std::invalid_argument("family_poly: i out of range");
  const std::int64_t sgn = sign == PolySign::plus ? 1 : -1;
  Poly p;
  switch (d) {
    case 2:
      p.c2 = 8 * mpz_class(i) * i;
      p.c1 = sgn * 4 * i;
      p.c0 = -1;
      break;
    case 3:
      p.c1 = 2 * i;
      p.c0 = sgn;
      break;
    case 4:
      p.c1 = 4 * i;
      p.c0 = sgn;
      break;
    case 6:
      p.c2 = 24 * mpz_class(i) * i;
      p.c1 = sgn * 12 * i;
      p.c0 = 1;
      break;
    default:
      throw std::invalid_argument("family_poly: d must be one of 2, 3, 4, 6");
  }
  return p;
}

ScanReport scan_family(int d, std::span<const std::int64_t> i_values,
                       std::span<const std::int64_t> w_values, PolySign sign, unsigned jobs) {
  if (i_values.empty() || w_values.empty())
    throw std::invalid_argument("scan_family: empty parameter range");
  ScanReport report;
  report.d = d;
  report.sign = sign;
  report.i_values.assign(i_values.begin(), i_values.end());
  report.w_values.assign(w_values.begin(), w_values.end());

  struct Cell {
    bool skipped = false;
    ScanSkip skip;
    ScanEntry entry;
  };
  std::vector<std::pair<std::int64_t, std::int64_t>> grid;
  for (std::int64_t i : i_values) {
    const Poly poly = family_poly(d, i, sign);  // validates i and d up front
    (void)poly;
    for (std::int64_t w : w_values)
      if (w != 0) grid.emplace_back(i, w);
  }
  std::vector<Cell> cells(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t g) {
    const auto [i, w] = grid[g];
    Cell& cell = cells[g];
    const std::int64_t t = d * i * i - 1;
    const EquationParams params(t);
    const std::int64_t n = 1 + 840 * w;
    const OffsetDecomposition dec = decompose(n);
    const Poly poly = family_poly(d, i, sign);
    const mpz_class pb = alpha_power_exact(params, dec.b).p;
    mpz_class N = poly.eval(pb);
    if (N < 0) N = -N;
    if (N < 3 || mpz_even_p(N.get_mpz_t())) {
      cell.skipped = true;
      cell.skip = {i, w, N < 3 ? "modulus below 3" : "modulus even"};
      return;
    }
    cell.entry.i = i;
    cell.entry.t = t;
    cell.entry.n = n;
    cell.entry.b = dec.b;
    cell.entry.modulus = N;
    cell.entry.value = jacobi(alpha_power_mod(params, n, N).p, N);
  });
  for (const Cell& cell : cells) {
    if (cell.skipped) {
      report.skipped.push_back(cell.skip);
      continue;
    }
    report.tested.push_back(cell.entry);
    if (cell.entry.value != -1) report.exceptions.push_back(cell.entry);
    if (cell.entry.value == 0) report.zero_symbols.push_back(cell.entry);
  }
  return report;
}

Conjecture31Result verify_conjecture31(std::int64_t i, std::int64_t w) {
  if (i < 1 || i % 2 == 0) throw std::invalid_argument("verify_conjecture31: i must be odd and >= 1");
  if (w == 0) throw std::invalid_argument("verify_conjecture31: w must be nonzero");
  Conjecture31Result res;
  res.i = i;
  res.t = 3 * i * i - 1;
  res.n = 1 + 840 * w;
  const EquationParams params(res.t);
  const OffsetDecomposition dec = decompose(res.n);
  res.b = dec.b;
  const AlphaPower ab = alpha_power_exact(params, dec.b);
  const mpz_class N = 2 * i * ab.p + 1;
  res.lhs = jacobi(alpha_power_mod(params, res.n, N).p, N);
  const int sgn = ((i - 1) / 2) % 2 == 0 ? 1 : -1;
  res.middle = sgn * jacobi(2 * mpz_class(res.t) * ab.q + 1, N);
  res.ok = res.lhs == -1 && res.middle == -1;
  return res;
}

}  // namespace qs
