#pragma once

#include <cstdint>
#include <vector>

#include "signlab/exact_vector.hpp"

namespace signlab::qs {

// Truncated formal power series with exact integer coefficients for
// q^0 .. q^trunc. Arithmetic on two series requires equal trunc; operations
// never resize implicitly.
class IntSeries {
  public:
    IntSeries() = default;
    explicit IntSeries(std::size_t trunc) : trunc_(trunc), c_(trunc + 1) {}

    std::size_t trunc() const { return trunc_; }
    std::size_t length() const { return trunc_ + 1; }

    mpz_class get(std::size_t i) const { return c_.get(i); }
    int sign_at(std::size_t i) const { return c_.sign_at(i); }
    double get_double(std::size_t i) const { return c_.get_double(i); }
    void set(std::size_t i, const mpz_class& v) { c_.set(i, v); }
    void set_i64(std::size_t i, std::int64_t v) { c_.set_i64(i, v); }

    ExactVector& coeffs() { return c_; }
    const ExactVector& coeffs() const { return c_; }

    bool operator==(const IntSeries& other) const {
        return trunc_ == other.trunc_ && c_ == other.c_;
    }

  private:
    std::size_t trunc_ = 0;
    ExactVector c_;
};

// P(q) = prod_{n>=1} (1 - q^n) truncated: +-1 exactly at the generalized
// pentagonal indices k(3k+-1)/2, zero elsewhere.
IntSeries euler_product_sparse(std::size_t trunc);

// a(q) * s(q^scale), truncated at a.trunc(). s is scanned for its nonzero
// support; cost is proportional to trunc * |support of s within trunc/scale|.
IntSeries mul_dense_sparse(const IntSeries& a, const IntSeries& s,
                           std::uint32_t scale = 1);

// Dense product truncated at the common trunc. Dispatches between schoolbook
// convolution and Kronecker substitution through one big-integer multiply.
IntSeries mul(const IntSeries& a, const IntSeries& b);
IntSeries mul_schoolbook(const IntSeries& a, const IntSeries& b);
IntSeries mul_kronecker(const IntSeries& a, const IntSeries& b);

struct EtaQuotient {
    struct Factor {
        std::uint32_t scale;   // the m of eta(m z)
        std::int32_t exponent; // the r of eta(m z)^r
    };
    std::vector<Factor> factors;

    std::int64_t weight_sum() const; // sum of scale * exponent
    // weight_sum()/24, the power of q carried by the q^{m/24} prefactors.
    std::uint64_t leading_power() const;
};

// q-expansion of prod_i eta(m_i z)^{r_i} without the fractional prefactor:
// index n holds the coefficient of q^n of q^{leading_power} * prod (1-q^{mn})^r.
// Only positive exponents with weight_sum divisible by 24 are supported.
IntSeries eta_quotient_expand(const EtaQuotient& eq, std::size_t trunc);

// E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
IntSeries eisenstein(int k, std::size_t trunc);

} // namespace signlab::qs
