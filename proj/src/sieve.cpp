#include "qs/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "qs/parallel.hpp"

namespace qs {

namespace {

// Word-sized mod-p pair arithmetic for the inner loops.  Mirrors the mpz
// rules in pell.cpp exactly; the unit tests cross-check the two paths.
struct WordPair {
  std::uint64_t p;
  std::uint64_t q;
  bool odd;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  a += b;  // a, b < m <= 2^63 in all call sites, no overflow
  return a >= m ? a - m : a;
}

struct WordCtx {
  std::uint64_t m;    // odd modulus (a prime in the sieve)
  std::uint64_t t;    // t mod m
  std::uint64_t t1;   // (t+1) mod m
  std::uint64_t d;    // t(t+1) mod m
};

WordCtx make_ctx(std::int64_t t, std::uint64_t m) {
  WordCtx c;
  c.m = m;
  c.t = static_cast<std::uint64_t>(t % static_cast<std::int64_t>(m));
  c.t1 = addmod(c.t, 1 % m, m);
  c.d = mulmod(c.t, c.t1, m);
  return c;
}

WordPair wmul(const WordPair& x, const WordPair& y, const WordCtx& c) {
  WordPair out;
  if (x.odd && y.odd) {
    out.p = addmod(mulmod(mulmod(c.t1, x.p, c.m), y.p, c.m),
                   mulmod(mulmod(c.t, x.q, c.m), y.q, c.m), c.m);
    out.q = addmod(mulmod(x.p, y.q, c.m), mulmod(x.q, y.p, c.m), c.m);
    out.odd = false;
  } else if (!x.odd && !y.odd) {
    out.p = addmod(mulmod(x.p, y.p, c.m), mulmod(c.d, mulmod(x.q, y.q, c.m), c.m), c.m);
    out.q = addmod(mulmod(x.p, y.q, c.m), mulmod(x.q, y.p, c.m), c.m);
    out.odd = false;
  } else {
    const WordPair& o = x.odd ? x : y;
    const WordPair& e = x.odd ? y : x;
    out.p = addmod(mulmod(o.p, e.p, c.m), mulmod(c.t, mulmod(o.q, e.q, c.m), c.m), c.m);
    out.q = addmod(mulmod(o.q, e.p, c.m), mulmod(c.t1, mulmod(o.p, e.q, c.m), c.m), c.m);
    out.odd = true;
  }
  return out;
}

WordPair wpow(const WordCtx& c, std::uint64_t e) {
  WordPair acc{1 % c.m, 0, false};
  const WordPair base{1 % c.m, 1 % c.m, true};
  if (e == 0) return acc;
  for (int bit = 63 - std::countl_zero(e); bit >= 0; --bit) {
    acc = wmul(acc, acc, c);
    if ((e >> bit) & 1) acc = wmul(acc, base, c);
  }
  return acc;
}

bool is_identity(const WordPair& w) { return !w.odd && w.p == 1 && w.q == 0; }

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) acc = mulmod(acc, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return acc;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
    if (n % p == 0) return n == p;
  }
  // deterministic Miller-Rabin for 64-bit inputs
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a % n, d, n);
    if (x <= 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::uint64_t> odd_primes_upto(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound < 3) return out;
  if (bound > (1ull << 31)) throw std::invalid_argument("prime_bound too large");
  const std::size_t n = static_cast<std::size_t>(bound);
  std::vector<std::uint8_t> composite(n + 1, 0);
  for (std::size_t i = 2; i * i <= n; ++i) {
    if (composite[i]) continue;
    for (std::size_t j = i * i; j <= n; j += i) composite[j] = 1;
  }
  for (std::size_t i = 3; i <= n; i += 2)
    if (!composite[i]) out.push_back(i);
  return out;
}

constexpr std::uint64_t kMaxWorkingModulus = 1ull << 28;  // alive bitmap stays modest

}  // namespace

std::uint64_t SieveConfig::working_modulus() const {
  if (t < 1) throw std::invalid_argument("SieveConfig: t must be >= 1");
  if (m < 1) throw std::invalid_argument("SieveConfig: m must be >= 1");
  unsigned __int128 M = m;
  for (unsigned i = 0; i < r; ++i) M *= 2;
  for (unsigned i = 0; i < s; ++i) M *= 3;
  if (M > kMaxWorkingModulus)
    throw std::invalid_argument("SieveConfig: working modulus exceeds supported size");
  return static_cast<std::uint64_t>(M);
}

FactorBase build_factor_base(const SieveConfig& config, const FactorBaseCache* cache,
                             unsigned jobs) {
  const std::uint64_t M = config.working_modulus();
  if (config.prime_bound < 3) throw std::invalid_argument("build_factor_base: prime_bound < 3");
  if (cache) {
    if (auto hit = cache->load(config.t, M, config.prime_bound)) return *hit;
  }
  FactorBase fb;
  fb.t = config.t;
  fb.M = M;
  fb.prime_bound = config.prime_bound;
  const std::vector<std::uint64_t> candidates = odd_primes_upto(config.prime_bound);
  std::vector<std::uint8_t> keep(candidates.size(), 0);
  parallel_for(candidates.size(), jobs, [&](std::size_t i) {
    const std::uint64_t p = candidates[i];
    const std::int64_t sp = static_cast<std::int64_t>(p);
    // p must not divide 2t(t+1) (degenerate sequence mod p) nor M itself.
    if ((config.t % sp) * ((config.t + 1) % sp) % sp == 0) return;
    if (M % p == 0) return;
    if (is_identity(wpow(make_ctx(config.t, p), M))) keep[i] = 1;
  });
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) fb.primes.push_back(candidates[i]);
  if (cache) cache->store(fb);
  return fb;
}

std::uint64_t sequence_period(const EquationParams& params, std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
    throw std::invalid_argument("sequence_period: p must be an odd prime");
  const WordCtx c = make_ctx(params.t, p);
  if (c.t == 0 || c.t1 == 0) throw std::invalid_argument("sequence_period: p divides 2t(t+1)");
  // ord(alpha^2) divides p - chi where chi is the character of t(t+1) mod p.
  const std::uint64_t chi = powmod(c.d, (p - 1) / 2, p);  // 1 or p-1; c.d != 0 here
  std::uint64_t order = (chi == 1) ? p - 1 : p + 1;
  // strip prime factors while the power stays at the identity
  std::uint64_t rem = order;
  std::vector<std::uint64_t> factors;
  for (std::uint64_t f = 2; f * f <= rem; ++f) {
    if (rem % f == 0) {
      factors.push_back(f);
      while (rem % f == 0) rem /= f;
    }
  }
  if (rem > 1) factors.push_back(rem);
  for (std::uint64_t f : factors) {
    while (order % f == 0 && is_identity(wpow(c, order / f * 2))) order /= f;
  }
  return 2 * order;
}

SieveOutcome run_sieve(const FactorBase& fb, std::uint64_t m, unsigned jobs) {
  const std::uint64_t M = fb.M;
  if (M < 2 || M % 2 != 0) throw std::invalid_argument("run_sieve: M must be even and >= 2");
  if (m < 1 || M % m != 0) throw std::invalid_argument("run_sieve: m must divide M");
  if (M > kMaxWorkingModulus) throw std::invalid_argument("run_sieve: M too large");
  const std::size_t half = static_cast<std::size_t>(M / 2);  // classes j = 2*idx + 1

  constexpr std::uint32_t kAlive = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> witness_idx(half, kAlive);

  // Per-prime forward passes are independent; each records its kill set and
  // the merge below walks primes in increasing order so the first (smallest)
  // eliminating prime is the witness no matter how many jobs ran.
  const std::size_t wave = std::max<std::size_t>(1, jobs);
  std::vector<std::vector<std::uint8_t>> kills(std::min(wave, std::max<std::size_t>(fb.primes.size(), 1)));
  for (std::size_t base = 0; base < fb.primes.size(); base += wave) {
    const std::size_t count = std::min(wave, fb.primes.size() - base);
    parallel_for(count, jobs, [&](std::size_t w) {
      const std::uint64_t p = fb.primes[base + w];
      std::vector<std::uint8_t>& kill = kills[w];
      kill.assign(half, 0);
      const WordCtx c = make_ctx(fb.t, p);
      // quadratic residues mod p (0 excluded: symbol 0 never eliminates)
      std::vector<std::uint8_t> qr(static_cast<std::size_t>(p), 0);
      for (std::uint64_t x = 0; x <= p / 2; ++x) qr[mulmod(x, x, p)] = 1;
      WordPair state{1 % p, 1 % p, true};                 // alpha^1
      const WordPair step{addmod(mulmod(2 % p, c.t, p), 1 % p, p), 2 % p, false};  // alpha^2
      for (std::size_t idx = 0; idx < half; ++idx) {
        if (state.p != 0 && !qr[state.p]) kill[idx] = 1;
        state = wmul(state, step, c);
      }
    });
    for (std::size_t w = 0; w < count; ++w) {
      const std::uint32_t prime_index = static_cast<std::uint32_t>(base + w);
      const std::vector<std::uint8_t>& kill = kills[w];
      for (std::size_t idx = 0; idx < half; ++idx)
        if (kill[idx] && witness_idx[idx] == kAlive) witness_idx[idx] = prime_index;
    }
  }

  SieveOutcome out;
  out.t = fb.t;
  out.m = m;
  out.M = M;
  std::set<std::uint64_t> mod_m;
  for (std::size_t idx = 0; idx < half; ++idx) {
    const std::uint64_t j = 2 * idx + 1;
    if (witness_idx[idx] == kAlive) {
      out.survivors_mod_M.push_back(j);
      mod_m.insert(j % m);
    } else {
      out.witnesses.emplace(j, SieveWitness{fb.primes[witness_idx[idx]], -1});
    }
  }
  out.survivors_mod_m.assign(mod_m.begin(), mod_m.end());

  // Symmetry j <-> M-j must be exact (P_{M-j} = P_{-j} = P_j mod every base
  // prime), including the witness prime itself.  A violation is a bug.
  for (std::size_t idx = 0; idx < half; ++idx) {
    const std::uint64_t j = 2 * idx + 1;
    const std::uint64_t jm = M - j;
    const std::size_t mirror = static_cast<std::size_t>((jm - 1) / 2);
    if (witness_idx[idx] != witness_idx[mirror])
      throw std::logic_error("run_sieve: symmetry violation at j=" + std::to_string(j));
  }
  return out;
}

EscalationResult escalate_range(std::int64_t t, std::uint64_t m, unsigned r_lo, unsigned r_hi,
                                unsigned s_lo, unsigned s_hi, std::uint64_t prime_bound,
                                const FactorBaseCache* cache, unsigned jobs) {
  if (r_lo > r_hi || s_lo > s_hi) throw std::invalid_argument("escalate: empty (r, s) range");
  struct Attempt {
    std::uint64_t M;
    unsigned r, s;
  };
  std::vector<Attempt> attempts;
  for (unsigned r = r_lo; r <= r_hi; ++r) {
    for (unsigned s = s_lo; s <= s_hi; ++s) {
      SieveConfig cfg{t, m, r, s, prime_bound};
      try {
        attempts.push_back({cfg.working_modulus(), r, s});
      } catch (const std::invalid_argument&) {
        // modulus overflow: skip this corner of the rectangle
      }
    }
  }
  if (attempts.empty()) throw std::invalid_argument("escalate: no admissible working modulus");
  std::sort(attempts.begin(), attempts.end(),
            [](const Attempt& a, const Attempt& b) { return a.M < b.M; });

  std::set<std::uint64_t> target{1 % m, 3 % m, (m - 3 % m) % m, (m - 1 % m) % m};

  std::optional<EscalationResult> best;
  for (const Attempt& at : attempts) {
    SieveConfig cfg{t, m, at.r, at.s, prime_bound};
    EscalationResult res;
    res.config = cfg;
    res.fb = build_factor_base(cfg, cache, jobs);
    res.outcome = run_sieve(res.fb, m, jobs);
    res.converged = std::all_of(res.outcome.survivors_mod_m.begin(),
                                res.outcome.survivors_mod_m.end(),
                                [&](std::uint64_t j) { return target.count(j) != 0; });
    if (res.converged) return res;
    if (!best || res.outcome.survivors_mod_m.size() < best->outcome.survivors_mod_m.size())
      best = std::move(res);
  }
  return *best;
}

EscalationResult escalate(std::int64_t t, std::uint64_t m, unsigned max_r, unsigned max_s,
                          std::uint64_t prime_bound, const FactorBaseCache* cache, unsigned jobs) {
  return escalate_range(t, m, 0, max_r, 0, max_s, prime_bound, cache, jobs);
}

std::optional<FactorBase> FactorBaseCache::load(std::int64_t t, std::uint64_t M,
                                                std::uint64_t prime_bound) const {
  if (dir_.empty()) return std::nullopt;
  std::ostringstream name;
  name << "fb-t" << t << "-M" << M << "-pb" << prime_bound << ".json";
  std::ifstream in(dir_ / name.str());
  if (!in) return std::nullopt;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("t", std::int64_t{-1}) != t || j.value("M", std::uint64_t{0}) != M ||
        j.value("prime_bound", std::uint64_t{0}) != prime_bound)
      return std::nullopt;
    FactorBase fb;
    fb.t = t;
    fb.M = M;
    fb.prime_bound = prime_bound;
    fb.primes = j.at("primes").get<std::vector<std::uint64_t>>();
    if (!std::is_sorted(fb.primes.begin(), fb.primes.end())) return std::nullopt;
    return fb;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // corrupt entry: recompute
  }
}

void FactorBaseCache::store(const FactorBase& fb) const {
  if (dir_.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) return;  // cache is best-effort
  nlohmann::json j{
      {"schema", 1}, {"t", fb.t}, {"M", fb.M}, {"prime_bound", fb.prime_bound}, {"primes", fb.primes}};
  std::ostringstream name;
  name << "fb-t" << fb.t << "-M" << fb.M << "-pb" << fb.prime_bound << ".json";
  const std::filesystem::path final_path = dir_ / name.str();
  std::random_device rd;
  const std::filesystem::path tmp_path =
      dir_ / (name.str() + ".tmp" + std::to_string(rd()) + std::to_string(::getpid()));
  {
    std::ofstream out(tmp_path);
    if (!out) return;
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) std::filesystem::remove(tmp_path, ec);
}

}  // namespace qs
