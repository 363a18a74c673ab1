#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "signlab/cli.hpp"
#include "signlab/eigenforms.hpp"
#include "signlab/errors.hpp"
#include "signlab/format.hpp"
#include "signlab/gmf.hpp"
#include "signlab/moments.hpp"
#include "signlab/numtheory.hpp"
#include "signlab/qseries.hpp"
#include "signlab/signchanges.hpp"

namespace signlab::cli {

namespace {

struct Suite {
    std::vector<CheckResult> results;

    void add(const std::string& name, bool pass, const std::string& detail = "") {
        results.push_back({name, pass, detail});
    }

    // Runs one named check; an exception is a failure, not an abort.
    void run(const std::string& name,
             const std::function<std::pair<bool, std::string>()>& body) {
        try {
            auto [pass, detail] = body();
            add(name, pass, detail);
        } catch (const std::exception& e) {
            add(name, false, std::string("exception: ") + e.what());
        }
    }
};

// dense product of (1 - q^n) for n = 1..trunc, the brute-force oracle the
// pentagonal pattern is checked against
qs::IntSeries dense_euler_oracle(std::size_t trunc) {
    qs::IntSeries acc(trunc);
    acc.set_i64(0, 1);
    for (std::size_t n = 1; n <= trunc; ++n) {
        qs::IntSeries factor(trunc);
        factor.set_i64(0, 1);
        factor.set_i64(n, -1);
        acc = qs::mul_schoolbook(acc, factor);
    }
    return acc;
}

qs::IntSeries random_series(std::mt19937& rng, std::size_t trunc) {
    std::uniform_int_distribution<int> coeff(-9, 9);
    qs::IntSeries s(trunc);
    for (std::size_t i = 0; i <= trunc; ++i) s.set_i64(i, coeff(rng));
    return s;
}

SignSeries random_sign_series(std::mt19937& rng, std::uint64_t n,
                              std::vector<double>* values = nullptr) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_int_distribution<int> zero(0, 4);
    SignSeries s;
    s.domain = "n";
    s.cover_lo = 1;
    s.cover_hi = n;
    for (std::uint64_t i = 1; i <= n; ++i) {
        double v = zero(rng) == 0 ? 0.0 : val(rng);
        if (values) values->push_back(v);
        s.entries.push_back({i, v > 0 ? 1 : (v < 0 ? -1 : 0)});
    }
    return s;
}

void numtheory_checks(Suite& suite) {
    suite.run("numtheory.moebius_divisor_sum", [] {
        for (std::uint64_t n = 1; n <= 10'000; ++n) {
            std::int64_t sum = 0;
            for (std::uint64_t d : nt::divisors(n)) sum += nt::moebius(d);
            if (sum != (n == 1 ? 1 : 0))
                return std::pair{false, "fails at n = " + std::to_string(n)};
        }
        return std::pair{true, std::string("n <= 10000")};
    });
    suite.run("numtheory.multiplicativity", [] {
        for (std::uint64_t m = 1; m <= 300; ++m)
            for (std::uint64_t n = m + 1; n <= 300; ++n) {
                if (std::gcd(m, n) != 1) continue;
                if (nt::moebius(m * n) != nt::moebius(m) * nt::moebius(n))
                    return std::pair{false, "moebius fails at (" + std::to_string(m) +
                                                "," + std::to_string(n) + ")"};
                for (std::uint32_t k : {0u, 1u, 3u})
                    if (nt::sigma(k, m * n) != nt::sigma(k, m) * nt::sigma(k, n))
                        return std::pair{false,
                                         "sigma_" + std::to_string(k) + " fails at (" +
                                             std::to_string(m) + "," +
                                             std::to_string(n) + ")"};
            }
        return std::pair{true, std::string("coprime m,n <= 300")};
    });
    suite.run("numtheory.sieve_vs_trial_division", [] {
        const auto primes = nt::sieve_primes(100'000);
        std::size_t idx = 0;
        for (std::uint64_t n = 2; n <= 100'000; ++n) {
            bool trial = true;
            for (std::uint64_t d = 2; d * d <= n; ++d)
                if (n % d == 0) {
                    trial = false;
                    break;
                }
            const bool sieved = idx < primes.size() && primes[idx] == n;
            if (sieved) ++idx;
            if (trial != sieved)
                return std::pair{false, "disagrees at n = " + std::to_string(n)};
        }
        return std::pair{idx == primes.size(), std::string("n <= 100000")};
    });
    suite.run("numtheory.divisor_count", [] {
        for (std::uint64_t n = 1; n <= 5'000; ++n) {
            std::size_t expect = 1;
            for (const auto& pp : nt::factorize(n).factors) expect *= pp.e + 1;
            if (nt::divisors(n).size() != expect)
                return std::pair{false, "fails at n = " + std::to_string(n)};
        }
        return std::pair{true, std::string("n <= 5000")};
    });
}

void qseries_checks(Suite& suite) {
    suite.run("qseries.euler_product_vs_bruteforce", [] {
        for (std::size_t trunc : {1, 2, 7, 12, 30, 100, 200}) {
            if (!(qs::euler_product_sparse(trunc) == dense_euler_oracle(trunc)))
                return std::pair{false, "differs at trunc " + std::to_string(trunc)};
        }
        return std::pair{true, std::string("trunc up to 200")};
    });
    suite.run("qseries.mul_commutative_associative", [] {
        std::mt19937 rng(12345);
        for (int round = 0; round < 40; ++round) {
            const std::size_t trunc = 1 + rng() % 64;
            const qs::IntSeries a = random_series(rng, trunc);
            const qs::IntSeries b = random_series(rng, trunc);
            const qs::IntSeries c = random_series(rng, trunc);
            if (!(qs::mul(a, b) == qs::mul(b, a)))
                return std::pair{false, std::string("commutativity fails")};
            if (!(qs::mul(qs::mul(a, b), c) == qs::mul(a, qs::mul(b, c))))
                return std::pair{false, std::string("associativity fails")};
        }
        return std::pair{true, std::string("40 random rounds")};
    });
    suite.run("qseries.schoolbook_vs_kronecker", [] {
        std::mt19937 rng(777);
        for (int round = 0; round < 20; ++round) {
            const std::size_t trunc = 1 + rng() % 200;
            const qs::IntSeries a = random_series(rng, trunc);
            const qs::IntSeries b = random_series(rng, trunc);
            if (!(qs::mul_schoolbook(a, b) == qs::mul_kronecker(a, b)))
                return std::pair{false, "differs at trunc " + std::to_string(trunc)};
        }
        return std::pair{true, std::string("20 random rounds")};
    });
    suite.run("qseries.eta24_strategy_independence", [] {
        const std::size_t trunc = 500;
        const qs::IntSeries chain =
            qs::eta_quotient_expand({{{1, 24}}}, trunc); // 24 sparse multiplies
        qs::IntSeries p = qs::euler_product_sparse(trunc - 1);
        qs::IntSeries p2 = qs::mul(p, p);
        qs::IntSeries p4 = qs::mul(p2, p2);
        qs::IntSeries p8 = qs::mul(p4, p4);
        qs::IntSeries p16 = qs::mul(p8, p8);
        qs::IntSeries p24 = qs::mul(p16, p8); // regrouped squaring route
        for (std::size_t n = 1; n <= trunc; ++n)
            if (chain.get(n) != p24.get(n - 1))
                return std::pair{false, "differs at q^" + std::to_string(n)};
        return std::pair{chain.get(0) == 0, std::string("trunc 500")};
    });
    suite.run("qseries.eta_quotients_normalized", [] {
        for (const auto& spec : forms::catalog()) {
            const qs::IntSeries s = qs::eta_quotient_expand(spec.eta, 64);
            const std::uint64_t lead = spec.eta.leading_power();
            if (s.get(lead) != 1)
                return std::pair{false, spec.name + " not normalized"};
            for (std::uint64_t i = 0; i < lead; ++i)
                if (s.sign_at(i) != 0)
                    return std::pair{false, spec.name + " nonzero below lead"};
        }
        return std::pair{true, std::string("all cataloged quotients")};
    });
}

void eigenform_checks(Suite& suite, const RunConfig& cfg, std::uint64_t level1_limit,
                      std::uint64_t weight2_limit,
                      const std::optional<std::filesystem::path>& cache) {
    struct Spot {
        forms::FormId id;
        std::uint64_t n;
        long value;
    };
    // a(2) fingerprints of the level-1 forms and first rows of the newforms
    const std::vector<Spot> spots = {
        {forms::FormId::delta, 2, -24},  {forms::FormId::delta, 3, 252},
        {forms::FormId::delta, 4, -1472}, {forms::FormId::delta, 5, 4830},
        {forms::FormId::delta, 6, -6048}, {forms::FormId::delta, 7, -16744},
        {forms::FormId::e16, 2, 216},    {forms::FormId::e18, 2, -528},
        {forms::FormId::e20, 2, 456},    {forms::FormId::e22, 2, -288},
        {forms::FormId::e26, 2, -48},    {forms::FormId::n11, 2, -2},
        {forms::FormId::n11, 3, -1},     {forms::FormId::n11, 4, 2},
        {forms::FormId::n11, 5, 1},      {forms::FormId::n14, 2, -1},
        {forms::FormId::n14, 3, -2},     {forms::FormId::n14, 4, 1},
        {forms::FormId::n14, 5, 0},      {forms::FormId::n15, 2, -1},
        {forms::FormId::n15, 3, -1},     {forms::FormId::n15, 4, -1},
        {forms::FormId::n15, 5, 1},
    };

    for (const auto& spec : forms::catalog()) {
        const std::uint64_t limit =
            spec.weight == 2 ? weight2_limit : level1_limit;
        forms::CoefficientTable table = forms::load_or_generate(spec.id, limit, cache);

        suite.run("eigenforms." + spec.name + ".spot_values", [&] {
            for (const Spot& s : spots) {
                if (s.id != spec.id || s.n > table.limit()) continue;
                if (table.a(s.n) != s.value)
                    return std::pair{false, "a(" + std::to_string(s.n) + ") = " +
                                                table.a(s.n).get_str() +
                                                ", expected " + std::to_string(s.value)};
            }
            return std::pair{table.a(1) == 1, std::string("a(1) = 1 and fingerprints")};
        });

        suite.run("eigenforms." + spec.name + ".multiplicativity", [&] {
            const std::uint64_t bound = std::min<std::uint64_t>(
                300, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))));
            const auto report = forms::verify_multiplicativity(table, bound);
            std::ostringstream detail;
            detail << "bound " << bound << ", " << report.coprime_violations.size()
                   << "+" << report.recurrence_violations.size() << " violations";
            return std::pair{report.ok(), detail.str()};
        });

        suite.run("eigenforms." + spec.name + ".deligne_bound", [&] {
            double worst = 0;
            for (std::uint64_t p : nt::sieve_primes(table.limit())) {
                if (spec.ramified(p)) continue;
                worst = std::max(worst, std::abs(table.lambda(p)));
            }
            return std::pair{worst <= 2.0 + 1e-9,
                             "max |lambda(p)| = " + fmt_g12(worst)};
        });

        if (spec.level > 1) {
            suite.run("eigenforms." + spec.name + ".ramified_units", [&] {
                for (std::uint64_t p : nt::sieve_primes(spec.level))
                    if (spec.ramified(p) && abs(table.a(p)) != 1)
                        return std::pair{false, "|a(" + std::to_string(p) + ")| != 1"};
                return std::pair{true, std::string("|a(p)| = 1 at ramified p")};
            });
        }

        suite.run("eigenforms." + spec.name + ".lambda_power_vs_table", [&] {
            const std::uint64_t top = std::min<std::uint64_t>(table.limit(), 10'000);
            forms::HeckeEvaluator ev(table);
            for (int j = 1; j <= 4; ++j) {
                for (std::uint64_t n = 1;; ++n) {
                    std::uint64_t nj = 1;
                    bool over = false;
                    for (int t = 0; t < j; ++t) {
                        nj *= n;
                        if (nj > top) {
                            over = true;
                            break;
                        }
                    }
                    if (over) break;
                    const forms::LambdaValue lv = ev.lambda_power(n, j);
                    if (lv.sign != table.sign_a(nj))
                        return std::pair{false, "sign differs at n=" + std::to_string(n) +
                                                    " j=" + std::to_string(j)};
                    const double direct = table.lambda(nj);
                    if (std::abs(lv.value - direct) >
                        1e-9 * std::max(1.0, std::abs(direct)))
                        return std::pair{false, "value differs at n=" +
                                                    std::to_string(n) +
                                                    " j=" + std::to_string(j)};
                }
            }
            return std::pair{true, std::string("n^j <= 10^4 vs direct table")};
        });
    }
    (void)cfg;
}

void gmf_checks(Suite& suite, std::uint64_t weight2_limit,
                const std::optional<std::filesystem::path>& cache) {
    for (const auto& spec : forms::catalog()) {
        if (spec.weight != 2) continue;
        forms::CoefficientTable table =
            forms::load_or_generate(spec.id, weight2_limit, cache);
        const gmf::ExponentTable exponents = gmf::exponents_from_coefficients(table);

        suite.run("gmf." + spec.name + ".roundtrip", [&] {
            if (exponents.m(1) != -1)
                return std::pair{false, std::string("m(1) != -1")};
            const gmf::RoundTrip rt = gmf::roundtrip_check(exponents, table);
            return std::pair{rt.ok,
                             rt.ok ? "exact to " + std::to_string(exponents.limit())
                                   : "first failure at n = " +
                                         std::to_string(rt.first_failing_n)};
        });

        suite.run("gmf." + spec.name + ".cprime_identity", [&] {
            for (std::uint64_t p : nt::sieve_primes(exponents.limit())) {
                const gmf::CPrime cp = gmf::cprime(exponents, p);
                const double lhs =
                    cp.value * std::sqrt(static_cast<double>(p)) + table.a_double(p);
                if (std::abs(lhs - 1.0) > 1e-12 * std::max(1.0, std::abs(lhs)))
                    return std::pair{false, "identity fails at p = " + std::to_string(p)};
                if (cp.sign != exponents.sign_m(p))
                    return std::pair{false, "sign mismatch at p = " + std::to_string(p)};
            }
            return std::pair{true, std::string("value*sqrt(p) + b(p) = 1")};
        });

        suite.run("gmf." + spec.name + ".cprime_bound", [&] {
            double worst = 0;
            for (std::uint64_t p : nt::sieve_primes(exponents.limit())) {
                const gmf::CPrime cp = gmf::cprime(exponents, p);
                worst = std::max(worst, std::abs(cp.value));
                if (spec.ramified(p)) {
                    const double expect = 2.0 / std::sqrt(static_cast<double>(p));
                    if (cp.value != 0.0 && std::abs(std::abs(cp.value) - expect) > 1e-12)
                        return std::pair{false,
                                         "ramified |c'(p)| not in {0, 2/sqrt(p)} at p = " +
                                             std::to_string(p)};
                }
            }
            return std::pair{worst <= 3.0, "max |c'(p)| = " + fmt_g12(worst)};
        });
    }
}

void signlab_checks(Suite& suite, std::uint64_t weight2_limit,
                    const std::optional<std::filesystem::path>& cache) {
    suite.run("signlab.counting_uses_signs_only", [&] {
        std::mt19937 rng(424242);
        std::uniform_real_distribution<double> scale(0.01, 100.0);
        for (int round = 0; round < 25; ++round) {
            std::vector<double> values;
            const SignSeries s = random_sign_series(rng, 400, &values);
            const double factor = scale(rng);
            SignSeries scaled = s;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double v = values[i] * factor;
                scaled.entries[i].sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
            }
            SignSeries flipped = s;
            for (auto& e : flipped.entries) e.sign = -e.sign;
            const auto r0 = count_sign_changes(s, 50, 300);
            const auto r1 = count_sign_changes(scaled, 50, 300);
            const auto r2 = count_sign_changes(flipped, 50, 300);
            if (r0.count != r1.count || r0.positions != r1.positions)
                return std::pair{false, std::string("positive scaling changed counts")};
            if (r0.count != r2.count || r0.positions != r2.positions)
                return std::pair{false, std::string("global flip changed counts")};
        }
        return std::pair{true, std::string("25 random rounds")};
    });

    suite.run("signlab.window_splitting", [&] {
        std::mt19937 rng(9999);
        std::uniform_int_distribution<std::uint64_t> split(120, 280);
        for (int round = 0; round < 25; ++round) {
            const SignSeries s = random_sign_series(rng, 400);
            const double a = 100, c = 390;
            const double b = static_cast<double>(split(rng));
            const auto whole = count_sign_changes(s, a, c - a);
            const auto left = count_sign_changes(s, a, b - a);
            const auto right = count_sign_changes(s, b, c - b);
            int last_left = 0, first_right = 0;
            for (const auto& e : s.entries) {
                if (e.sign == 0) continue;
                if (e.index > a && e.index <= b) last_left = e.sign;
                if (first_right == 0 && e.index > b && e.index <= c)
                    first_right = e.sign;
            }
            const std::uint64_t bridge =
                (last_left != 0 && first_right != 0 && last_left != first_right) ? 1 : 0;
            if (whole.count != left.count + right.count + bridge)
                return std::pair{false, std::string("split identity fails")};
        }
        return std::pair{true, std::string("25 random splits")};
    });

    suite.run("signlab.count_bounded_by_nonzeros", [&] {
        std::mt19937 rng(31337);
        for (int round = 0; round < 25; ++round) {
            const SignSeries s = random_sign_series(rng, 300);
            const auto r = count_sign_changes(s, 0, 300);
            std::uint64_t nonzero = 0;
            for (const auto& e : s.entries) nonzero += e.sign != 0;
            if (nonzero >= 1 && r.count > nonzero - 1)
                return std::pair{false, std::string("count exceeds nonzero - 1")};
        }
        return std::pair{true, std::string("25 random rounds")};
    });

    suite.run("signlab.theorem_constants_premise", [] {
        for (int j : {2, 3, 4}) {
            const TheoremConstants& tc = theorem_constants(j);
            if (!(1.0 - tc.delta() > tc.beta()))
                return std::pair{false, "1 - delta_j <= beta_j at j = " + std::to_string(j)};
        }
        return std::pair{true, std::string("1 - delta_j > beta_j for j = 2,3,4")};
    });

    suite.run("signlab.interval_moments_spot", [&] {
        const forms::CoefficientTable delta =
            forms::load_or_generate(forms::FormId::delta, 64, cache);
        const IntervalMoments im = interval_moments(delta, 2, 1, 3);
        const bool ok = std::abs(im.first - (-1.1249158)) < 1e-6 &&
                        std::abs(im.second - 0.9835366) < 1e-6;
        return std::pair{ok, "first = " + fmt_g12(im.first) +
                                 ", second = " + fmt_g12(im.second)};
    });

    suite.run("signlab.fit_exponent_lines", [] {
        const ExponentFit unit = fit_exponent({{100, 10}, {1000, 100}});
        const ExponentFit flat = fit_exponent({{100, 5}, {10000, 5}});
        const bool ok = std::abs(unit.slope - 1.0) < 1e-12 &&
                        unit.max_residual < 1e-12 && std::abs(flat.slope) < 1e-12;
        return std::pair{ok, "slopes " + fmt_g12(unit.slope) + ", " +
                                 fmt_g12(flat.slope)};
    });

    const forms::CoefficientTable n11 =
        forms::load_or_generate(forms::FormId::n11, weight2_limit, cache);

    suite.run("signlab.s2_over_x_band", [&] {
        const PrimeSumReport r = prime_sums(n11, static_cast<double>(n11.limit()));
        const bool ok = r.s2_over_x >= 0.5 && r.s2_over_x <= 1.5;
        return std::pair{ok, "S2/x = " + fmt_g12(r.s2_over_x) + " at x = " +
                                 fmt_g12(r.x)};
    });

    suite.run("signlab.abel_consistency", [&] {
        const double x = static_cast<double>(std::min<std::uint64_t>(n11.limit(), 10'000));
        const double gap = abel_consistency(n11, x);
        return std::pair{gap <= 1e-6, "gap = " + fmt_g12(gap) + " at x = " + fmt_g12(x)};
    });
}

} // namespace

std::vector<CheckResult> run_verify_suite(const RunConfig& cfg) {
    const std::vector<std::string> suites = {"numtheory", "qseries", "eigenforms",
                                             "gmf", "signlab"};
    if (cfg.suite != "all" &&
        std::find(suites.begin(), suites.end(), cfg.suite) == suites.end())
        throw UsageError("unknown suite: " + cfg.suite);
    const auto enabled = [&](const char* name) {
        return cfg.suite == "all" || cfg.suite == name;
    };

    // default desk-scale limits; --limit raises both
    const std::uint64_t level1_limit =
        cfg.limit ? std::min(cfg.limit, forms::kTableCeiling) : 5'000;
    const std::uint64_t weight2_limit =
        cfg.limit ? std::min(cfg.limit, forms::kTableCeiling) : 10'000;
    std::optional<std::filesystem::path> cache;
    if (!cfg.cache_dir.empty()) cache = std::filesystem::path(cfg.cache_dir);

    Suite suite;
    if (enabled("numtheory")) numtheory_checks(suite);
    if (enabled("qseries")) qseries_checks(suite);
    if (enabled("eigenforms"))
        eigenform_checks(suite, cfg, level1_limit, weight2_limit, cache);
    if (enabled("gmf")) gmf_checks(suite, weight2_limit, cache);
    if (enabled("signlab")) signlab_checks(suite, weight2_limit, cache);
    return suite.results;
}

} // namespace signlab::cli
