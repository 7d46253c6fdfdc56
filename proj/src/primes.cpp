#include "halnum/primes.hpp"

#include <algorithm>
#include <cmath>

#include "halnum/parallel.hpp"

namespace halnum {

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

constexpr std::uint64_t kSegment = 1u << 20;

}  // namespace

std::size_t PrimeTables::first_prime_geq(double y) const {
  // Primes are ascending; find first p with (double)p >= y.
  auto it = std::lower_bound(primes_.begin(), primes_.end(), y,
                             [](std::uint32_t p, double v) {
                               return static_cast<double>(p) < v;
                             });
  return static_cast<std::size_t>(it - primes_.begin());
}

std::size_t PrimeTables::first_prime_gt(double y) const {
  auto it = std::upper_bound(primes_.begin(), primes_.end(), y,
                             [](double v, std::uint32_t p) {
                               return v < static_cast<double>(p);
                             });
  return static_cast<std::size_t>(it - primes_.begin());
}

std::size_t PrimeTables::count_leq(double y) const { return first_prime_gt(y); }

PrimeTables build_tables(std::uint64_t limit, unsigned threads) {
  if (limit < 2) throw capacity_error("build_tables: limit must be >= 2");
  if (limit > kSieveHardCap)
    throw capacity_error("build_tables: limit exceeds hard cap 10^8");

  std::vector<std::uint32_t> spf(limit + 1, 0);

  // Base primes up to sqrt(limit) by a plain sieve.
  const std::uint64_t root = isqrt_u64(limit);
  std::vector<std::uint32_t> base;
  {
    std::vector<char> comp(root + 1, 0);
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (comp[i]) continue;
      base.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t m = i * i; m <= root; m += i) comp[m] = 1;
    }
  }

  // Mark smallest prime factors segment by segment. Segments are disjoint,
  // so concurrent workers never touch the same spf slot. Within a segment,
  // base primes ascend, and "first mark wins" yields the smallest factor.
  const std::size_t nseg = static_cast<std::size_t>(limit / kSegment) + 1;
  run_blocks(nseg, threads, [&](std::size_t s) {
    const std::uint64_t lo = std::max<std::uint64_t>(2, s * kSegment);
    const std::uint64_t hi = std::min(limit, (s + 1) * kSegment - 1);
    if (lo > hi) return;
    for (std::uint32_t p : base) {
      const std::uint64_t p64 = p;
      if (p64 * p64 > hi) break;
      std::uint64_t start = std::max(p64 * p64, ((lo + p64 - 1) / p64) * p64);
      for (std::uint64_t m = start; m <= hi; m += p64) {
        if (spf[m] == 0) spf[m] = p;
      }
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (spf[n] == 0) spf[n] = static_cast<std::uint32_t>(n);
    }
  });

  std::vector<std::uint32_t> primes;
  if (limit >= 3) {
    // pi(x) ~ x / (ln x - 1); reserve with a little slack.
    const double estimate =
        static_cast<double>(limit) / std::max(1.0, std::log(static_cast<double>(limit)) - 1.1);
    primes.reserve(static_cast<std::size_t>(estimate * 1.1) + 16);
  }
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (spf[n] == n) primes.push_back(static_cast<std::uint32_t>(n));
  }

  return PrimeTables(limit, std::move(spf), std::move(primes));
}

double von_mangoldt(const PrimeTables& t, std::uint64_t n) {
  if (n < 1 || n > t.limit())
    throw capacity_error("von_mangoldt: n outside [1, limit]");
  if (n == 1) return 0.0;
  const std::uint64_t p = t.spf(n);
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

std::vector<PrimeFactor> factorize(const PrimeTables& t, std::uint64_t n) {
  if (n < 1 || n > t.limit())
    throw capacity_error("factorize: n outside [1, limit]");
  std::vector<PrimeFactor> out;
  while (n > 1) {
    const std::uint64_t p = t.spf(n);
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back(PrimeFactor{p, e});
  }
  return out;
}

}  // namespace halnum
