#pragma once

// Seeded generators for randomized instances. Draws use raw mt19937_64
// output reduced modulo the range, so streams are identical across platforms.

#include <random>
#include <vector>

#include "genus/abmod.hpp"
#include "genus/heis.hpp"
#include "genus/rank1.hpp"

namespace genus::sample {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  std::int64_t in(std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(below(hi - lo + 1)); }
  bool coin() { return below(2) == 1; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<Prime> primes_below(Prime bound) {
  std::vector<Prime> out;
  for (Prime p = 2; p < bound; p = next_prime(p)) out.push_back(p);
  return out;
}

/// +-prod p^v over up to three primes of the pool, v in [-3, 3].
inline Rational random_rational(Rng& rng, const std::vector<Prime>& pool) {
  Rational q = rng.coin() ? 1 : -1;
  if (pool.empty()) return q;
  int terms = static_cast<int>(rng.below(4));
  for (int t = 0; t < terms; ++t) q *= rpow(Rational(rng.pick(pool)), static_cast<int>(rng.in(-3, 3)));
  return q;
}

/// Primes below bound not in S (the S-units are built from these).
inline std::vector<Prime> unit_pool(const PartitionFamily& f, Prime bound) {
  std::vector<Prime> out;
  for (Prime p : primes_below(bound))
    if (!f.s().contains(p)) out.push_back(p);
  return out;
}

inline std::map<BlockIndex, Rational> random_exceptions(Rng& rng, const PartitionFamily& f, Prime bound) {
  std::vector<Prime> pool = unit_pool(f, bound);
  std::vector<Prime> residual;
  for (Prime p : primes_below(bound))
    if (f.residual().contains(p)) residual.push_back(p);
  std::map<BlockIndex, Rational> exc;
  if (residual.empty()) return exc;
  int n = static_cast<int>(rng.below(4));
  for (int k = 0; k < n; ++k) {
    Prime p = rng.pick(residual);
    Rational q = random_rational(rng, pool);
    // Make the valuation at the block's own prime nonzero half the time.
    if (rng.coin()) q *= rpow(Rational(p), static_cast<int>(rng.in(-3, 3)));
    exc[f.block_of(p)] = q;
  }
  return exc;
}

/// A random S-bounded family: finite exceptions and a tail of id, a constant or p^0.
inline rank1::AutFamily1 random_bounded(Rng& rng, const PartitionFamily& f, Prime bound = 100) {
  auto exc = random_exceptions(rng, f, bound);
  rank1::Tail tail = rank1::TailIdentity{};
  switch (rng.below(3)) {
    case 1: tail = rank1::TailConstant{random_rational(rng, unit_pool(f, bound))}; break;
    case 2:
      if (f.is_singletons()) tail = rank1::TailIndexPrimePower{0};
      break;
    default: break;
  }
  return rank1::AutFamily1(f, exc, tail);
}

/// A random S-bounded-above family; singleton families may get a tail p^k with k <= 0.
inline rank1::AutFamily1 random_bounded_above(Rng& rng, const PartitionFamily& f, Prime bound = 100) {
  if (!f.is_singletons() || rng.below(3) == 0) return random_bounded(rng, f, bound);
  return rank1::AutFamily1(f, random_exceptions(rng, f, bound), rank1::TailIndexPrimePower{static_cast<int>(rng.in(-3, 0))});
}

/// A random explicit family over primes below 12, sometimes with T = all.
inline PartitionFamily random_explicit_family(Rng& rng) {
  const std::vector<Prime> pool{2, 3, 5, 7, 11};
  bool cofinite = rng.below(4) == 0;
  std::vector<Prime> t;
  for (Prime p : pool)
    if (cofinite || rng.coin()) t.push_back(p);
  if (t.size() < 2) t = {2, 3};
  std::vector<Prime> s, res;
  for (Prime p : t) (rng.below(4) == 0 ? s : res).push_back(p);
  if (res.empty()) res.push_back(s.back()), s.pop_back();
  std::size_t k = 1 + rng.below(std::min<std::size_t>(3, res.size()));
  std::vector<std::vector<Prime>> parts(k);
  for (std::size_t i = 0; i < res.size(); ++i) parts[i < k ? i : rng.below(k)].push_back(res[i]);
  PrimeSet ss = PrimeSet::finite(s);
  std::vector<PrimeSet> blocks;
  PrimeSet tt = cofinite ? PrimeSet::all() : PrimeSet::finite(t);
  for (std::size_t i = 0; i < k; ++i) blocks.push_back(ss.unite(PrimeSet::finite(parts[i])));
  if (cofinite) {
    // The last block absorbs every prime outside the pool.
    PrimeSet used = ss;
    for (std::size_t i = 0; i + 1 < k; ++i) used = used.unite(blocks[i]);
    blocks.back() = PrimeSet::all().difference(used).unite(ss);
  }
  return PartitionFamily::explicit_blocks(tt, ss, blocks);
}

/// A random module with up to three generators and relations in [-12, 12].
inline FGModule random_module(Rng& rng, const PrimeSet& t, std::size_t max_gens = 3) {
  std::size_t n = 1 + rng.below(max_gens);
  std::size_t r = rng.below(n + 2);
  IntMatrix rel(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) rel(i, j) = rng.in(-12, 12);
  return FGModule(t, rel, n);
}

}  // namespace genus::sample
