#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace signlab::nt {

// Default ceiling for sieve_primes / factorize. Everything in this module is
// exact and deterministic up to here; larger requests raise CapacityError.
inline constexpr std::uint64_t kDefaultCeiling = 100'000'000;

// All primes in [2, limit], ascending. limit < 2 gives an empty list.
// Segmented, so memory stays O(sqrt(limit) + segment).
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit,
                                        std::uint64_t ceiling = kDefaultCeiling);

struct PrimePower {
    std::uint64_t p;
    std::uint32_t e;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    std::uint64_t n = 1;
    std::vector<PrimePower> factors; // primes strictly increasing, e >= 1
};

// Exact factorization, n = 1 gives an empty factor list. Deterministic trial
// division over a cached base-prime table (no probabilistic tests).
Factorization factorize(std::uint64_t n, std::uint64_t ceiling = kDefaultCeiling);

bool is_prime(std::uint64_t n);

// Moebius function: 0 if n is not squarefree, else (-1)^(#prime factors).
int moebius(std::uint64_t n);

// moebius(1..limit) as a table; index 0 is unused. Sieve-based, for bulk use.
std::vector<std::int8_t> moebius_table(std::uint64_t limit);

// All divisors of n, ascending.
std::vector<std::uint64_t> divisors(std::uint64_t n);

// sigma_k(n) = sum of d^k over d | n, exact. k <= 16.
mpz_class sigma(std::uint32_t k, std::uint64_t n);

// Smallest-prime-factor table for bulk factorization of consecutive indices.
// Immutable once built; safe to share across threads.
class SpfTable {
  public:
    explicit SpfTable(std::uint32_t limit);
    std::uint32_t limit() const { return limit_; }
    Factorization factorize(std::uint64_t n) const;

  private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
};

} // namespace signlab::nt
