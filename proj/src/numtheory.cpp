#include "signlab/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "signlab/errors.hpp"

namespace signlab::nt {

namespace {

std::uint64_t isqrt64(std::uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Base primes shared by factorize/is_prime. 10^4 covers trial division of
// every n <= kDefaultCeiling = 10^8. Built once, immutable afterwards.
const std::vector<std::uint64_t>& base_primes() {
    static const std::vector<std::uint64_t> primes = sieve_primes(10'000);
    return primes;
}

} // namespace

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit, std::uint64_t ceiling) {
    if (limit > ceiling)
        throw CapacityError("sieve_primes: limit " + std::to_string(limit) +
                            " exceeds ceiling " + std::to_string(ceiling));
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;

    const std::uint64_t root = isqrt64(limit);
    // Plain sieve for the base range [2, root].
    std::vector<std::uint8_t> base(root + 1, 1);
    std::vector<std::uint64_t> base_list;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!base[i]) continue;
        base_list.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) base[j] = 0;
    }

    primes.reserve(limit > 16 ? static_cast<std::size_t>(
                                    static_cast<double>(limit) /
                                    (std::log(static_cast<double>(limit)) - 1.2))
                              : 8);
    const std::uint64_t segment = 1 << 18;
    std::vector<std::uint8_t> mark(segment);
    for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
        const std::uint64_t hi = std::min(limit, lo + segment - 1);
        const std::uint64_t len = hi - lo + 1;
        std::fill(mark.begin(), mark.begin() + len, 1);
        for (std::uint64_t p : base_list) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (std::uint64_t j = start; j <= hi; j += p) mark[j - lo] = 0;
        }
        for (std::uint64_t i = 0; i < len; ++i)
            if (mark[i]) primes.push_back(lo + i);
    }
    return primes;
}

Factorization factorize(std::uint64_t n, std::uint64_t ceiling) {
    if (n == 0) throw DomainError("factorize: n must be positive");
    if (n > ceiling)
        throw CapacityError("factorize: n " + std::to_string(n) +
                            " exceeds ceiling " + std::to_string(ceiling));
    Factorization f;
    f.n = n;
    std::uint64_t rem = n;
    for (std::uint64_t p : base_primes()) {
        if (p * p > rem) break;
        if (rem % p) continue;
        std::uint32_t e = 0;
        while (rem % p == 0) {
            rem /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    }
    // No factor <= sqrt(rem) remains, so rem is prime (or 1).
    if (rem > 1) f.factors.push_back({rem, 1});
    return f;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : base_primes()) {
        if (p * p > n) return true;
        if (n % p == 0) return n == p;
    }
    return true;
}

int moebius(std::uint64_t n) {
    const Factorization f = factorize(n);
    for (const auto& pp : f.factors)
        if (pp.e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

std::vector<std::int8_t> moebius_table(std::uint64_t limit) {
    std::vector<std::int8_t> mu(limit + 1, 1);
    if (limit == 0) return mu;
    mu[0] = 0;
    for (std::uint64_t p : sieve_primes(limit)) {
        for (std::uint64_t m = p; m <= limit; m += p) mu[m] = -mu[m];
        const std::uint64_t p2 = p * p;
        if (p2 > limit) continue;
        for (std::uint64_t m = p2; m <= limit; m += p2) mu[m] = 0;
    }
    return mu;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    const Factorization f = factorize(n);
    std::vector<std::uint64_t> divs{1};
    for (const auto& pp : f.factors) {
        const std::size_t before = divs.size();
        std::uint64_t pe = 1;
        for (std::uint32_t e = 1; e <= pp.e; ++e) {
            pe *= pp.p;
            for (std::size_t i = 0; i < before; ++i) divs.push_back(divs[i] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

mpz_class sigma(std::uint32_t k, std::uint64_t n) {
    if (k > 16) throw UsageError("sigma: k must be <= 16");
    const Factorization f = factorize(n);
    mpz_class result = 1;
    for (const auto& pp : f.factors) {
        if (k == 0) {
            result *= pp.e + 1;
            continue;
        }
        // (p^{k(e+1)} - 1) / (p^k - 1)
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(pp.p), k);
        mpz_class num;
        mpz_pow_ui(num.get_mpz_t(), pk.get_mpz_t(), pp.e + 1);
        num -= 1;
        result *= num / (pk - 1);
    }
    return result;
}

SpfTable::SpfTable(std::uint32_t limit) : limit_(limit), spf_(limit + 1, 0) {
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i]) continue;
        for (std::uint64_t j = i; j <= limit; j += i)
            if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
    }
}

Factorization SpfTable::factorize(std::uint64_t n) const {
    if (n == 0) throw DomainError("SpfTable::factorize: n must be positive");
    if (n > limit_)
        throw CapacityError("SpfTable::factorize: n exceeds table limit");
    Factorization f;
    f.n = n;
    while (n > 1) {
        const std::uint64_t p = spf_[n];
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    }
    return f;
}

} // namespace signlab::nt
