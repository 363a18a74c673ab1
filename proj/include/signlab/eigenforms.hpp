#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "signlab/exact_vector.hpp"
#include "signlab/numtheory.hpp"
#include "signlab/qseries.hpp"

namespace signlab::forms {

// Largest coefficient table the generator will build in one go.
inline constexpr std::uint64_t kTableCeiling = 10'000'000;

enum class FormId { delta, e16, e18, e20, e22, e26, n11, n14, n15 };

// A cataloged normalized eigenform: the level-1 forms of weight 12..26 with
// one-dimensional cusp space, built as eta(z)^24 times Eisenstein factors,
// and the weight-2 newforms of squarefree level 11, 14, 15, built as pure
// eta quotients.
struct FormSpec {
    FormId id;
    std::string name;
    int weight;
    std::uint32_t level;
    qs::EtaQuotient eta;
    std::vector<int> eisenstein_factors; // each entry 4 or 6

    bool ramified(std::uint64_t p) const { return level % p == 0; }
};

const std::vector<FormSpec>& catalog();
const FormSpec& form_spec(FormId id);
const FormSpec* find_form(std::string_view name); // nullptr when unknown

// Exact coefficients a(1)..a(limit) of one cataloged form. Immutable after
// construction; safe to share across threads.
class CoefficientTable {
  public:
    CoefficientTable(const FormSpec& spec, std::uint64_t limit, ExactVector a);

    const FormSpec& form() const { return *spec_; }
    std::uint64_t limit() const { return limit_; }

    mpz_class a(std::uint64_t n) const;
    int sign_a(std::uint64_t n) const;
    double a_double(std::uint64_t n) const;
    // lambda(n) = a(n) / n^{(k-1)/2}
    double lambda(std::uint64_t n) const;

    bool a_fits_i64(std::uint64_t n) const;
    std::int64_t a_i64(std::uint64_t n) const;

  private:
    void check_range(std::uint64_t n) const;
    const FormSpec* spec_;
    std::uint64_t limit_;
    ExactVector a_; // slot n holds a(n); slot 0 unused (cusp form: a(0) = 0)
};

CoefficientTable generate_coefficients(FormId form, std::uint64_t limit);

// a(p^r) by the Hecke recurrence from a(p) (and p^{k-1}); for p dividing the
// level of a weight-2 newform, a(p^r) = a(p)^r.
mpz_class hecke_prime_power(const CoefficientTable& t, std::uint64_t p,
                            std::uint32_t r);

struct LambdaValue {
    double value; // lambda(n^j), float
    int sign;     // sign of the exact integer a(n^j)
};

// lambda(n^j) computed multiplicatively over the prime powers of n; never
// materializes a table out to n^j. The sign comes from exact integers only.
LambdaValue lambda_power(const CoefficientTable& t, std::uint64_t n, int j);

struct MultiplicativityReport {
    struct CoprimePair {
        std::uint64_t m, n;
    };
    struct PrimePower {
        std::uint64_t p;
        std::uint32_t r;
    };
    std::vector<CoprimePair> coprime_violations;     // a(mn) != a(m) a(n)
    std::vector<PrimePower> recurrence_violations;   // recurrence != table
    bool ok() const {
        return coprime_violations.empty() && recurrence_violations.empty();
    }
};

// Checks a(mn) = a(m) a(n) for coprime m, n <= bound and the prime-power
// recurrence against the table for every p^r <= limit. Reports, never throws
// on a math failure.
MultiplicativityReport verify_multiplicativity(const CoefficientTable& t,
                                               std::uint64_t bound);

// Memoizing evaluator for scans that touch many lambda(n^j) values. Owns a
// per-instance cache; the table itself stays immutable.
class HeckeEvaluator {
  public:
    explicit HeckeEvaluator(const CoefficientTable& t) : t_(&t) {}

    const CoefficientTable& table() const { return *t_; }
    LambdaValue lambda_prime_power(std::uint64_t p, std::uint32_t r);
    LambdaValue lambda_power(std::uint64_t n, int j);
    LambdaValue lambda_power(const nt::Factorization& f, int j);

  private:
    const CoefficientTable* t_;
    std::unordered_map<std::uint64_t, LambdaValue> memo_;
};

// --- coefficient cache files ---------------------------------------------
// One file per (form, limit): a header line
//   # form=<id> weight=<k> level=<N> limit=<L>
// then ascending lines "n<TAB>a(n)" in decimal. Round trips bit-exactly.

std::filesystem::path cache_file_name(const FormSpec& spec, std::uint64_t limit);
void write_cache_file(const CoefficientTable& t, const std::filesystem::path& file);
CoefficientTable read_cache_file(const std::filesystem::path& file);

// Loads from cache_dir when a file with matching form and limit >= limit
// exists (rows beyond the request are ignored; rows are trusted only up to
// the header limit). Otherwise generates, and writes the new file when
// cache_dir is set.
CoefficientTable load_or_generate(FormId form, std::uint64_t limit,
                                  const std::optional<std::filesystem::path>& cache_dir);

} // namespace signlab::forms
