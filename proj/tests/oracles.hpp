#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

// Independent reference computations the library is checked against. These
// deliberately avoid the library's strategies: no pentagonal support, no
// Kronecker packing, no Hecke recurrences.
namespace oracle {

using Series = std::vector<mpz_class>; // coefficients of q^0 .. q^trunc

// schoolbook convolution truncated at a.size()-1
Series conv(const Series& a, const Series& b);

// prod_{n=1..trunc} (1 - q^n), one binomial factor at a time
Series euler_dense(std::size_t trunc);

// q^{lead} * prod_i prod_n (1 - q^{m_i n})^{r_i} by repeated in-place
// binomial multiplication; factors are (scale, exponent) pairs with the
// usual divisible-by-24 leading power.
Series eta_quotient_dense(const std::vector<std::pair<unsigned, int>>& factors,
                          std::size_t trunc);

bool trial_is_prime(std::uint64_t n);

// m(n) = -sum_{d|n} mu(n/d) b(d) straight from the divisor list of n
mpz_class moebius_inversion_at(const std::vector<mpz_class>& b, std::uint64_t n);

} // namespace oracle
