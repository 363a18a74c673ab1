#pragma once

#include <cstdint>
#include <iosfwd>

#include "signlab/eigenforms.hpp"
#include "signlab/exact_vector.hpp"

namespace signlab::gmf {

// q-exponents of the generalized modular function attached to a weight-2
// newform g = sum b(n) q^n: the product expansion exponents c(n) are stored
// exactly through the integers m(n) = n * c(n), recovered by Moebius
// inversion of b(n) = -sum_{d|n} d c(d), i.e. m(n) = -sum_{d|n} mu(n/d) b(d).
class ExponentTable {
  public:
    ExponentTable(const forms::FormSpec& spec, std::uint64_t limit, ExactVector m);

    const forms::FormSpec& form() const { return *spec_; }
    std::uint64_t limit() const { return limit_; }

    mpz_class m(std::uint64_t n) const;   // n * c(n), exact
    int sign_m(std::uint64_t n) const;
    double c(std::uint64_t n) const;      // m(n)/n as a double

    bool m_fits_i64(std::uint64_t n) const;
    std::int64_t m_i64(std::uint64_t n) const;

  private:
    void check_range(std::uint64_t n) const;
    const forms::FormSpec* spec_;
    std::uint64_t limit_;
    ExactVector m_; // slot n holds m(n); slot 0 unused
};

// Inverts the divisor identity for a weight-2 newform table. The inversion
// is integral by construction; b(1) = 1 (so m(1) = -1) is enforced as a hard
// error because anything else means the source is not a normalized newform.
ExponentTable exponents_from_coefficients(const forms::CoefficientTable& source);

struct RoundTrip {
    bool ok = true;
    std::uint64_t first_failing_n = 0; // 0 when ok
};

// Exact check that b(n) = -sum_{d|n} m(d) for every n <= exp.limit().
RoundTrip roundtrip_check(const ExponentTable& exp,
                          const forms::CoefficientTable& source);

struct CPrime {
    double value; // (1 - b(p)) / sqrt(p) = m(p)/sqrt(p)
    int sign;     // sign of the exact integer m(p) = 1 - b(p)
};

CPrime cprime(const ExponentTable& exp, std::uint64_t p);

// CSV export: header "n,m_n,c_n_float", floats with 12 significant digits.
void write_exponent_csv(const ExponentTable& exp, std::ostream& os);

} // namespace signlab::gmf
