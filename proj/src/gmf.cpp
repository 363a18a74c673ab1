#include "signlab/gmf.hpp"

#include <cmath>
#include <ostream>

#include "signlab/errors.hpp"
#include "signlab/format.hpp"
#include "signlab/numtheory.hpp"

namespace signlab::gmf {

ExponentTable::ExponentTable(const forms::FormSpec& spec, std::uint64_t limit,
                             ExactVector m)
    : spec_(&spec), limit_(limit), m_(std::move(m)) {
    if (m_.size() != limit_ + 1)
        throw UsageError("ExponentTable: storage size must be limit+1");
}

void ExponentTable::check_range(std::uint64_t n) const {
    if (n == 0) throw DomainError("exponent index must be positive");
    if (n > limit_)
        throw InsufficientDataError("m(" + std::to_string(n) +
                                    ") beyond table limit " + std::to_string(limit_));
}

mpz_class ExponentTable::m(std::uint64_t n) const {
    check_range(n);
    return m_.get(n);
}

int ExponentTable::sign_m(std::uint64_t n) const {
    check_range(n);
    return m_.sign_at(n);
}

double ExponentTable::c(std::uint64_t n) const {
    check_range(n);
    return m_.get_double(n) / static_cast<double>(n);
}

bool ExponentTable::m_fits_i64(std::uint64_t n) const {
    check_range(n);
    if (m_.small()) {
        const int128 v = m_.small_data()[n];
        return v >= static_cast<int128>(std::int64_t(-0x7fffffffffffffffLL - 1)) &&
               v <= static_cast<int128>(std::int64_t(0x7fffffffffffffffLL));
    }
    return m_.big_data()[n].fits_slong_p();
}

std::int64_t ExponentTable::m_i64(std::uint64_t n) const {
    if (m_.small()) return static_cast<std::int64_t>(m_.small_data()[n]);
    return m_.big_data()[n].get_si();
}

ExponentTable exponents_from_coefficients(const forms::CoefficientTable& source) {
    const forms::FormSpec& spec = source.form();
    if (spec.weight != 2)
        throw UnsupportedError("exponents_from_coefficients: needs a weight-2 "
                               "newform table, got weight " +
                               std::to_string(spec.weight));
    const std::uint64_t limit = source.limit();

    // m(n) = -sum_{e|n} mu(e) b(n/e), accumulated per e over its multiples.
    // Weight-2 coefficients fit comfortably in 64 bits (|b(n)| <= d(n) sqrt(n)),
    // as do the divisor sums; fall back to exact big integers otherwise.
    bool all_i64 = true;
    for (std::uint64_t n = 1; n <= limit && all_i64; ++n)
        all_i64 = source.a_fits_i64(n);

    const std::vector<std::int8_t> mu = nt::moebius_table(limit);
    ExactVector m(limit + 1);
    if (all_i64) {
        std::vector<std::int64_t> b(limit + 1);
        for (std::uint64_t n = 1; n <= limit; ++n) b[n] = source.a_i64(n);
        std::vector<std::int64_t> acc(limit + 1, 0);
        for (std::uint64_t e = 1; e <= limit; ++e) {
            if (mu[e] == 0) continue;
            if (mu[e] > 0)
                for (std::uint64_t n = e; n <= limit; n += e) acc[n] -= b[n / e];
            else
                for (std::uint64_t n = e; n <= limit; n += e) acc[n] += b[n / e];
        }
        for (std::uint64_t n = 1; n <= limit; ++n) m.set_i64(n, acc[n]);
    } else {
        std::vector<mpz_class> acc(limit + 1);
        for (std::uint64_t e = 1; e <= limit; ++e) {
            if (mu[e] == 0) continue;
            for (std::uint64_t n = e; n <= limit; n += e) {
                if (mu[e] > 0)
                    acc[n] -= source.a(n / e);
                else
                    acc[n] += source.a(n / e);
            }
        }
        m.promote();
        for (std::uint64_t n = 1; n <= limit; ++n)
            mpz_swap(m.big_data()[n].get_mpz_t(), acc[n].get_mpz_t());
    }

    if (limit >= 1 && m.get(1) != -1)
        throw UsageError("exponents_from_coefficients: b(1) != 1, source is not "
                         "a normalized newform table");
    return ExponentTable(spec, limit, std::move(m));
}

RoundTrip roundtrip_check(const ExponentTable& exp,
                          const forms::CoefficientTable& source) {
    if (&exp.form() != &source.form())
        throw UsageError("roundtrip_check: tables belong to different forms");
    if (exp.limit() > source.limit())
        throw UsageError("roundtrip_check: exponent table exceeds source limit");
    const std::uint64_t limit = exp.limit();

    bool all_i64 = true;
    for (std::uint64_t n = 1; n <= limit && all_i64; ++n)
        all_i64 = exp.m_fits_i64(n) && source.a_fits_i64(n);

    RoundTrip rt;
    if (all_i64) {
        std::vector<std::int64_t> acc(limit + 1, 0);
        for (std::uint64_t d = 1; d <= limit; ++d) {
            const std::int64_t md = exp.m_i64(d);
            if (md == 0) continue;
            for (std::uint64_t n = d; n <= limit; n += d) acc[n] += md;
        }
        for (std::uint64_t n = 1; n <= limit; ++n) {
            if (-acc[n] != source.a_i64(n)) {
                rt.ok = false;
                rt.first_failing_n = n;
                break;
            }
        }
    } else {
        std::vector<mpz_class> acc(limit + 1);
        for (std::uint64_t d = 1; d <= limit; ++d) {
            const mpz_class md = exp.m(d);
            if (sgn(md) == 0) continue;
            for (std::uint64_t n = d; n <= limit; n += d) acc[n] += md;
        }
        for (std::uint64_t n = 1; n <= limit; ++n) {
            if (mpz_class(-acc[n]) != source.a(n)) {
                rt.ok = false;
                rt.first_failing_n = n;
                break;
            }
        }
    }
    return rt;
}

CPrime cprime(const ExponentTable& exp, std::uint64_t p) {
    if (!nt::is_prime(p)) throw DomainError("cprime: p must be prime");
    const mpz_class mp = exp.m(p); // 1 - b(p) for primes
    const int sign = sgn(mp);
    const double value = mp.get_d() / std::sqrt(static_cast<double>(p));
    return {value, sign};
}

void write_exponent_csv(const ExponentTable& exp, std::ostream& os) {
    os << "n,m_n,c_n_float\n";
    for (std::uint64_t n = 1; n <= exp.limit(); ++n)
        os << n << ',' << exp.m(n).get_str() << ',' << fmt_g12(exp.c(n)) << '\n';
}

} // namespace signlab::gmf
