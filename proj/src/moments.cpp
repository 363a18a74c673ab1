#include "signlab/moments.hpp"

#include <cmath>

#include "signlab/errors.hpp"
#include "signlab/numtheory.hpp"

namespace signlab {

const TheoremConstants& theorem_constants(int j) {
    static const TheoremConstants table[] = {
        {2, 2, 11, 1, 2},
        {3, 1, 9, 3, 4},
        {4, 2, 27, 7, 9},
    };
    for (const auto& tc : table)
        if (tc.j == j) return tc;
    throw DomainError("theorem_constants: j must be in {2,3,4}");
}

namespace {

// Shared lambda(n^j) walk over 1..hi with memoized prime powers.
template <typename Visit>
void walk_lambda_powers(const forms::CoefficientTable& t, int j, std::uint64_t lo,
                        std::uint64_t hi, Visit visit) {
    if (hi < lo) return;
    forms::HeckeEvaluator ev(t);
    if (hi <= 0xffffffffULL) {
        const nt::SpfTable spf(static_cast<std::uint32_t>(hi));
        for (std::uint64_t n = lo; n <= hi; ++n)
            visit(n, ev.lambda_power(spf.factorize(n), j));
    } else {
        for (std::uint64_t n = lo; n <= hi; ++n) visit(n, ev.lambda_power(n, j));
    }
}

} // namespace

IntervalMoments interval_moments(const forms::CoefficientTable& t, int j, double x,
                                 double h) {
    if (!(x >= 0) || !(h >= 0)) throw UsageError("interval_moments: bad window");
    const std::uint64_t lo = static_cast<std::uint64_t>(std::floor(x)) + 1;
    const std::uint64_t hi = static_cast<std::uint64_t>(std::floor(x + h));

    CompensatedSum first, second;
    walk_lambda_powers(t, j, std::max<std::uint64_t>(lo, 1), hi,
                       [&](std::uint64_t, forms::LambdaValue lv) {
                           first.add(lv.value);
                           second.add(lv.value * lv.value);
                       });

    IntervalMoments out{first.value(), second.value(), 0.0, 0.0};
    if (j >= 2 && j <= 4) {
        const TheoremConstants& tc = theorem_constants(j);
        const PowerMoments pm = power_moment_sums(t, j, x + h);
        out.second_scale = h * pm.density;
        out.first_scale = std::pow(x + h, tc.beta());
    }
    return out;
}

PowerMoments power_moment_sums(const forms::CoefficientTable& t, int j, double x) {
    if (!(x >= 1)) throw UsageError("power_moment_sums: need x >= 1");
    const std::uint64_t hi = static_cast<std::uint64_t>(std::floor(x));
    CompensatedSum first, second;
    walk_lambda_powers(t, j, 1, hi, [&](std::uint64_t, forms::LambdaValue lv) {
        first.add(lv.value);
        second.add(lv.value * lv.value);
    });
    PowerMoments out{first.value(), second.value(), 0.0};
    out.density = out.second / x;
    return out;
}

PrimeSumReport prime_sums(const forms::CoefficientTable& t, double x) {
    if (!(x >= 1)) throw UsageError("prime_sums: need x >= 1");
    const std::uint64_t hi = static_cast<std::uint64_t>(std::floor(x));
    if (hi > t.limit())
        throw InsufficientDataError("prime_sums: table limit " +
                                    std::to_string(t.limit()) + " below x");
    const bool weight2 = t.form().weight == 2;

    CompensatedSum s1, s2, c2;
    for (std::uint64_t p : nt::sieve_primes(hi)) {
        const double lam = t.lambda(p);
        const double logp = std::log(static_cast<double>(p));
        s1.add(lam * logp);
        s2.add(lam * lam * logp);
        if (weight2) {
            // c'(p) = (1 - b(p)) / sqrt(p), from the exact integer 1 - b(p)
            const double num = 1.0 - t.a_double(p);
            const double cp = num / std::sqrt(static_cast<double>(p));
            c2.add(cp * cp);
        }
    }
    PrimeSumReport r{};
    r.x = x;
    r.s1 = s1.value();
    r.s2 = s2.value();
    r.c2 = weight2 ? c2.value() : std::nan("");
    r.s1_over_x = r.s1 / x;
    r.s2_over_x = r.s2 / x;
    r.c2_logx_over_x = weight2 ? r.c2 * std::log(x) / x : std::nan("");
    return r;
}

double abel_consistency(const forms::CoefficientTable& t, double x) {
    if (t.form().weight != 2)
        throw UnsupportedError("abel_consistency: needs a weight-2 newform");
    if (!(x >= 3)) throw UsageError("abel_consistency: need x >= 3");
    const std::uint64_t hi = static_cast<std::uint64_t>(std::floor(x));
    if (hi > t.limit())
        throw InsufficientDataError("abel_consistency: table limit below x");

    const std::vector<std::uint64_t> primes = nt::sieve_primes(hi);
    if (primes.empty()) return 0.0;

    // direct = sum a_p; weighted = sum a_p log p as a running step function
    // S(t), constant between consecutive primes. Partial summation gives
    //   sum a_p = S(x)/log x + integral_2^x S(t)/(t log^2 t) dt
    // and the integral of 1/(t log^2 t) over [u, v] is 1/log u - 1/log v.
    CompensatedSum direct, weighted, integral;
    const double logx = std::log(x);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = static_cast<double>(primes[i]);
        const double ap = [&] {
            const double num = 1.0 - t.a_double(primes[i]);
            const double cp = num / std::sqrt(p);
            return cp * cp;
        }();
        direct.add(ap);
        weighted.add(ap * std::log(p));
        const double seg_end =
            (i + 1 < primes.size()) ? static_cast<double>(primes[i + 1]) : x;
        integral.add(weighted.value() *
                     (1.0 / std::log(p) - 1.0 / std::log(seg_end)));
    }
    const double reconstructed = weighted.value() / logx + integral.value();
    const double d = direct.value();
    if (d == 0.0) return 0.0;
    return std::abs(d - reconstructed) / d;
}

} // namespace signlab
