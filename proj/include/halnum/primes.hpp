#pragma once

#include <cstdint>
#include <vector>

#include "halnum/errors.hpp"

namespace halnum {

// Hard cap on the sieve size (memory scales as 4 bytes per integer).
inline constexpr std::uint64_t kSieveHardCap = 100'000'000;     // 10^8
inline constexpr std::uint64_t kSieveDefaultLimit = 10'000'000;  // 10^7

struct PrimeFactor {
  std::uint64_t p;
  std::uint32_t e;
};

// Smallest-prime-factor table plus the ordered prime list up to `limit`.
// Immutable once built; safe to share across threads.
class PrimeTables {
 public:
  PrimeTables(std::uint64_t limit, std::vector<std::uint32_t> spf,
              std::vector<std::uint32_t> primes)
      : limit_(limit), spf_(std::move(spf)), primes_(std::move(primes)) {}

  std::uint64_t limit() const { return limit_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  // Smallest prime factor of n, 2 <= n <= limit.
  std::uint32_t spf(std::uint64_t n) const {
    if (n < 2 || n > limit_)
      throw capacity_error("spf: n outside [2, limit]");
    return spf_[n];
  }

  bool is_prime(std::uint64_t n) const {
    return n >= 2 && n <= limit_ && spf_[n] == n;
  }

  // Index of the first prime >= y / > y; primes().size() when none.
  std::size_t first_prime_geq(double y) const;
  std::size_t first_prime_gt(double y) const;
  // Number of primes <= y.
  std::size_t count_leq(double y) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

// Builds the tables with a segmented sieve. Segments are fixed-size, so the
// result is identical for every thread count. Throws capacity_error when
// limit < 2 or limit > kSieveHardCap.
PrimeTables build_tables(std::uint64_t limit, unsigned threads = 1);

// Lambda(n): log p when n = p^e, 0 otherwise (including n = 1).
double von_mangoldt(const PrimeTables& t, std::uint64_t n);

// Prime factorization in ascending prime order; n = 1 gives the empty list.
std::vector<PrimeFactor> factorize(const PrimeTables& t, std::uint64_t n);

}  // namespace halnum
