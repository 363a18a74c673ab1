#include "signlab/eigenforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "signlab/errors.hpp"

namespace signlab::forms {

namespace {

// a / n^{(k-1)/2} in doubles without overflowing intermediate powers:
// a = mant * 2^e, so the quotient is mant * 2^(e - (k-1)/2 * log2(n)).
double lambda_from_exact(const mpz_class& a, double log2_n, int weight) {
    if (sgn(a) == 0) return 0.0;
    long e = 0;
    const double mant = mpz_get_d_2exp(&e, a.get_mpz_t());
    const double shift = static_cast<double>(e) - 0.5 * (weight - 1) * log2_n;
    return mant * std::exp2(shift);
}

constexpr std::uint32_t kMaxPrimePowerExp = 511; // memo key packs r in 9 bits

} // namespace

const std::vector<FormSpec>& catalog() {
    static const std::vector<FormSpec> forms = {
        {FormId::delta, "delta", 12, 1, {{{1, 24}}}, {}},
        {FormId::e16, "e16", 16, 1, {{{1, 24}}}, {4}},
        {FormId::e18, "e18", 18, 1, {{{1, 24}}}, {6}},
        {FormId::e20, "e20", 20, 1, {{{1, 24}}}, {4, 4}},
        {FormId::e22, "e22", 22, 1, {{{1, 24}}}, {4, 6}},
        {FormId::e26, "e26", 26, 1, {{{1, 24}}}, {4, 4, 6}},
        {FormId::n11, "n11", 2, 11, {{{1, 2}, {11, 2}}}, {}},
        {FormId::n14, "n14", 2, 14, {{{1, 1}, {2, 1}, {7, 1}, {14, 1}}}, {}},
        {FormId::n15, "n15", 2, 15, {{{1, 1}, {3, 1}, {5, 1}, {15, 1}}}, {}},
    };
    return forms;
}

const FormSpec& form_spec(FormId id) {
    for (const FormSpec& f : catalog())
        if (f.id == id) return f;
    throw UsageError("form_spec: unknown form id");
}

const FormSpec* find_form(std::string_view name) {
    for (const FormSpec& f : catalog())
        if (f.name == name) return &f;
    return nullptr;
}

CoefficientTable::CoefficientTable(const FormSpec& spec, std::uint64_t limit,
                                   ExactVector a)
    : spec_(&spec), limit_(limit), a_(std::move(a)) {
    if (a_.size() != limit_ + 1)
        throw UsageError("CoefficientTable: storage size must be limit+1");
}

void CoefficientTable::check_range(std::uint64_t n) const {
    if (n == 0) throw DomainError("coefficient index must be positive");
    if (n > limit_)
        throw InsufficientDataError("coefficient a(" + std::to_string(n) +
                                    ") beyond table limit " + std::to_string(limit_));
}

mpz_class CoefficientTable::a(std::uint64_t n) const {
    check_range(n);
    return a_.get(n);
}

int CoefficientTable::sign_a(std::uint64_t n) const {
    check_range(n);
    return a_.sign_at(n);
}

double CoefficientTable::a_double(std::uint64_t n) const {
    check_range(n);
    return a_.get_double(n);
}

double CoefficientTable::lambda(std::uint64_t n) const {
    check_range(n);
    return lambda_from_exact(a_.get(n), std::log2(static_cast<double>(n)),
                             spec_->weight);
}

bool CoefficientTable::a_fits_i64(std::uint64_t n) const {
    check_range(n);
    if (a_.small()) {
        const int128 v = a_.small_data()[n];
        return v >= static_cast<int128>(std::int64_t(-0x7fffffffffffffffLL - 1)) &&
               v <= static_cast<int128>(std::int64_t(0x7fffffffffffffffLL));
    }
    return a_.big_data()[n].fits_slong_p();
}

std::int64_t CoefficientTable::a_i64(std::uint64_t n) const {
    if (a_.small()) return static_cast<std::int64_t>(a_.small_data()[n]);
    return a_.big_data()[n].get_si();
}

CoefficientTable generate_coefficients(FormId form, std::uint64_t limit) {
    if (limit < 2) throw UsageError("generate_coefficients: limit must be >= 2");
    if (limit > kTableCeiling)
        throw CapacityError("generate_coefficients: limit " + std::to_string(limit) +
                            " exceeds ceiling " + std::to_string(kTableCeiling));
    const FormSpec& spec = form_spec(form);
    qs::IntSeries series = qs::eta_quotient_expand(spec.eta, limit);
    for (int k : spec.eisenstein_factors)
        series = qs::mul(series, qs::eisenstein(k, limit));
    return CoefficientTable(spec, limit, std::move(series.coeffs()));
}

mpz_class hecke_prime_power(const CoefficientTable& t, std::uint64_t p,
                            std::uint32_t r) {
    if (!nt::is_prime(p)) throw DomainError("hecke_prime_power: p must be prime");
    if (r == 0) return 1;
    if (p > t.limit())
        throw InsufficientDataError("hecke_prime_power: a(p) not available for p = " +
                                    std::to_string(p));
    const mpz_class ap = t.a(p);
    if (t.form().ramified(p)) {
        mpz_class out;
        mpz_pow_ui(out.get_mpz_t(), ap.get_mpz_t(), r);
        return out;
    }
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(t.form().weight - 1));
    mpz_class prev = 1, cur = ap;
    for (std::uint32_t i = 1; i < r; ++i) {
        mpz_class next = ap * cur - pk * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

LambdaValue HeckeEvaluator::lambda_prime_power(std::uint64_t p, std::uint32_t r) {
    if (r == 0) return {1.0, 1};
    if (r > kMaxPrimePowerExp)
        throw UsageError("lambda_prime_power: exponent too large");
    const std::uint64_t key = (p << 9) | r;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    if (p > t_->limit())
        throw InsufficientDataError("lambda_prime_power: a(p) not available for p = " +
                                    std::to_string(p));
    const int weight = t_->form().weight;
    const double log2_p = std::log2(static_cast<double>(p));
    const mpz_class ap = t_->a(p);

    if (t_->form().ramified(p)) {
        const int sp = sgn(ap);
        for (std::uint32_t i = 1; i <= r; ++i) {
            const int sign = sp == 0 ? 0 : ((sp < 0 && i % 2 == 1) ? -1 : 1);
            mpz_class api;
            mpz_pow_ui(api.get_mpz_t(), ap.get_mpz_t(), i);
            const double value = lambda_from_exact(api, i * log2_p, weight);
            memo_[(p << 9) | i] = {value, sign};
        }
        return memo_[key];
    }

    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(weight - 1));
    mpz_class prev = 1, cur = ap;
    memo_[(p << 9) | 1] = {lambda_from_exact(ap, log2_p, weight), sgn(ap)};
    for (std::uint32_t i = 2; i <= r; ++i) {
        mpz_class next = ap * cur - pk * prev;
        prev = std::move(cur);
        cur = std::move(next);
        memo_[(p << 9) | i] = {lambda_from_exact(cur, i * log2_p, weight), sgn(cur)};
    }
    return memo_[key];
}

LambdaValue HeckeEvaluator::lambda_power(std::uint64_t n, int j) {
    if (j < 1 || j > 4) throw DomainError("lambda_power: j must be in {1,2,3,4}");
    if (n == 0) throw DomainError("lambda_power: n must be positive");
    if (n == 1) return {1.0, 1};
    return lambda_power(nt::factorize(n), j);
}

LambdaValue HeckeEvaluator::lambda_power(const nt::Factorization& f, int j) {
    if (j < 1 || j > 4) throw DomainError("lambda_power: j must be in {1,2,3,4}");
    double value = 1.0;
    int sign = 1;
    for (const auto& pp : f.factors) {
        const LambdaValue lv =
            lambda_prime_power(pp.p, static_cast<std::uint32_t>(j) * pp.e);
        value *= lv.value;
        sign *= lv.sign;
    }
    return {value, sign};
}

LambdaValue lambda_power(const CoefficientTable& t, std::uint64_t n, int j) {
    HeckeEvaluator ev(t);
    return ev.lambda_power(n, j);
}

MultiplicativityReport verify_multiplicativity(const CoefficientTable& t,
                                               std::uint64_t bound) {
    if (bound * bound > t.limit())
        throw UsageError("verify_multiplicativity: bound^2 exceeds table limit");
    MultiplicativityReport report;
    for (std::uint64_t m = 2; m <= bound; ++m) {
        for (std::uint64_t n = m + 1; n <= bound; ++n) {
            if (std::gcd(m, n) != 1) continue;
            if (t.a(m * n) != t.a(m) * t.a(n))
                report.coprime_violations.push_back({m, n});
        }
    }
    // Primes with p^2 <= limit have nontrivial recurrence entries in range;
    // for larger p the r = 1 entry is the recurrence seed itself.
    for (std::uint64_t p : nt::sieve_primes(static_cast<std::uint64_t>(
             std::sqrt(static_cast<double>(t.limit()))))) {
        const mpz_class ap = t.a(p);
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(t.form().weight - 1));
        const bool ram = t.form().ramified(p);
        mpz_class prev = 1, cur = ap;
        std::uint32_t r = 2;
        for (std::uint64_t pr = p * p; pr <= t.limit(); pr *= p, ++r) {
            mpz_class next = ram ? mpz_class(ap * cur) : mpz_class(ap * cur - pk * prev);
            prev = std::move(cur);
            cur = std::move(next);
            if (t.a(pr) != cur) report.recurrence_violations.push_back({p, r});
        }
    }
    return report;
}

// --- cache files -----------------------------------------------------------

std::filesystem::path cache_file_name(const FormSpec& spec, std::uint64_t limit) {
    return spec.name + "_" + std::to_string(limit) + ".tsv";
}

void write_cache_file(const CoefficientTable& t, const std::filesystem::path& file) {
    std::ofstream os(file);
    if (!os) throw UsageError("cannot open cache file for writing: " + file.string());
    os << "# form=" << t.form().name << " weight=" << t.form().weight
       << " level=" << t.form().level << " limit=" << t.limit() << "\n";
    for (std::uint64_t n = 1; n <= t.limit(); ++n)
        os << n << '\t' << t.a(n).get_str() << '\n';
    if (!os) throw UsageError("write failed: " + file.string());
}

CoefficientTable read_cache_file(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw UsageError("cannot open cache file: " + file.string());
    std::string header;
    std::getline(is, header);
    std::string name;
    int weight = 0;
    std::uint32_t level = 0;
    std::uint64_t limit = 0;
    {
        std::istringstream hs(header);
        std::string tag, kv;
        hs >> tag;
        if (tag != "#") throw UsageError("bad cache header: " + file.string());
        while (hs >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw UsageError("bad cache header field: " + kv);
            const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "form") name = val;
            else if (key == "weight") weight = std::stoi(val);
            else if (key == "level") level = static_cast<std::uint32_t>(std::stoul(val));
            else if (key == "limit") limit = std::stoull(val);
            else throw UsageError("unknown cache header field: " + key);
        }
    }
    const FormSpec* spec = find_form(name);
    if (spec == nullptr) throw UsageError("cache file for unknown form: " + name);
    if (spec->weight != weight || spec->level != level)
        throw UsageError("cache header disagrees with catalog for form " + name);
    if (limit < 1) throw UsageError("cache header limit must be >= 1");

    ExactVector a(limit + 1);
    std::string line;
    std::uint64_t expect = 1;
    mpz_class value;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw UsageError("bad cache line: " + line);
        const std::uint64_t n = std::stoull(line.substr(0, tab));
        if (n != expect)
            throw UsageError("cache rows out of order at n = " + std::to_string(n));
        if (value.set_str(line.substr(tab + 1), 10) != 0)
            throw UsageError("bad integer in cache at n = " + std::to_string(n));
        a.set(n, value);
        ++expect;
    }
    if (expect != limit + 1)
        throw UsageError("cache file truncated: " + file.string());
    return CoefficientTable(*spec, limit, std::move(a));
}

namespace {

CoefficientTable truncate_table(const CoefficientTable& t, std::uint64_t limit) {
    ExactVector a(limit + 1);
    for (std::uint64_t n = 1; n <= limit; ++n) a.set(n, t.a(n));
    return CoefficientTable(t.form(), limit, std::move(a));
}

} // namespace

CoefficientTable load_or_generate(FormId form, std::uint64_t limit,
                                  const std::optional<std::filesystem::path>& cache_dir) {
    const FormSpec& spec = form_spec(form);
    if (cache_dir) {
        const auto exact = *cache_dir / cache_file_name(spec, limit);
        if (std::filesystem::exists(exact)) {
            CoefficientTable t = read_cache_file(exact);
            if (t.limit() != limit)
                throw UsageError("cache header limit disagrees with file name: " +
                                 exact.string());
            return t;
        }
        // any larger cache of the same form serves a prefix read
        std::uint64_t best = 0;
        const std::string prefix = spec.name + "_";
        if (std::filesystem::is_directory(*cache_dir)) {
            for (const auto& entry : std::filesystem::directory_iterator(*cache_dir)) {
                const std::string fn = entry.path().filename().string();
                if (fn.rfind(prefix, 0) != 0 || entry.path().extension() != ".tsv")
                    continue;
                const std::string digits =
                    fn.substr(prefix.size(), fn.size() - prefix.size() - 4);
                if (digits.empty() ||
                    digits.find_first_not_of("0123456789") != std::string::npos)
                    continue;
                const std::uint64_t file_limit = std::stoull(digits);
                if (file_limit > limit && (best == 0 || file_limit < best))
                    best = file_limit;
            }
        }
        if (best != 0) {
            CoefficientTable full =
                read_cache_file(*cache_dir / cache_file_name(spec, best));
            return truncate_table(full, limit);
        }
        CoefficientTable t = generate_coefficients(form, limit);
        std::filesystem::create_directories(*cache_dir);
        write_cache_file(t, exact);
        return t;
    }
    return generate_coefficients(form, limit);
}

} // namespace signlab::forms
