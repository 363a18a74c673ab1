#include "signlab/qseries.hpp"

#include <algorithm>
#include <cstring>

#include "signlab/errors.hpp"

namespace signlab::qs {

namespace {

inline bool add_checked(int128 a, int128 b, int128* out) {
    return __builtin_add_overflow(a, b, out);
}
inline bool mul_checked(int128 a, int128 b, int128* out) {
    return __builtin_mul_overflow(a, b, out);
}

int ceil_log2(std::size_t n) {
    int bits = 0;
    std::size_t v = 1;
    while (v < n) {
        v <<= 1;
        ++bits;
    }
    return bits;
}

// Nonzero support of a series, up to index max_idx. Coefficients are kept as
// int64 when they all fit (the common case: +-1 pentagonal patterns).
struct SparseSupport {
    std::vector<std::size_t> idx;
    std::vector<std::int64_t> c64;
    std::vector<mpz_class> cbig;
    bool all_i64 = true;
};

SparseSupport extract_support(const IntSeries& s, std::size_t max_idx) {
    SparseSupport sup;
    const std::size_t hi = std::min(max_idx, s.trunc());
    for (std::size_t i = 0; i <= hi; ++i) {
        if (s.sign_at(i) == 0) continue;
        mpz_class v = s.get(i);
        sup.idx.push_back(i);
        if (sup.all_i64 && v.fits_slong_p()) {
            sup.c64.push_back(v.get_si());
        } else {
            sup.all_i64 = false;
        }
        sup.cbig.push_back(std::move(v));
    }
    if (!sup.all_i64) sup.c64.clear();
    return sup;
}

// The P(q) support straight from the pentagonal recurrence, no dense scan.
SparseSupport pentagonal_support(std::size_t max_idx) {
    SparseSupport sup;
    sup.idx.push_back(0);
    sup.c64.push_back(1);
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t g1 = k * (3 * k - 1) / 2;
        if (g1 > max_idx) break;
        const std::int64_t sign = (k % 2 == 1) ? -1 : 1;
        sup.idx.push_back(g1);
        sup.c64.push_back(sign);
        const std::uint64_t g2 = k * (3 * k + 1) / 2;
        if (g2 <= max_idx) {
            sup.idx.push_back(g2);
            sup.c64.push_back(sign);
        }
    }
    // interleave order does not matter for the kernel, but keep it sorted
    std::vector<std::size_t> order(sup.idx.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sup.idx[a] < sup.idx[b]; });
    SparseSupport sorted;
    sorted.idx.reserve(order.size());
    sorted.c64.reserve(order.size());
    for (std::size_t i : order) {
        sorted.idx.push_back(sup.idx[i]);
        sorted.c64.push_back(sup.c64[i]);
    }
    sorted.cbig.reserve(order.size());
    for (std::int64_t c : sorted.c64) sorted.cbig.emplace_back(static_cast<long>(c));
    return sorted;
}

// acc(q) <- acc(q) * s(q^scale), truncated at acc's trunc. The downward loop
// makes the update in-place safe: position n reads only positions <= n, all
// still holding pre-update values when n is reached.
void mul_sparse_big(ExactVector& acc, const SparseSupport& sup, std::uint32_t scale,
                    std::size_t start_n) {
    auto& big = acc.big_data();
    mpz_class sum, tmp;
    for (std::size_t n = start_n + 1; n-- > 0;) {
        sum = 0;
        for (std::size_t k = 0; k < sup.idx.size(); ++k) {
            const std::size_t off = sup.idx[k] * scale;
            if (off > n) break;
            const mpz_class& av = big[n - off];
            if (sgn(av) == 0) continue;
            if (sup.all_i64) {
                const std::int64_t c = sup.c64[k];
                if (c >= 0)
                    mpz_addmul_ui(sum.get_mpz_t(), av.get_mpz_t(),
                                  static_cast<unsigned long>(c));
                else
                    mpz_submul_ui(sum.get_mpz_t(), av.get_mpz_t(),
                                  static_cast<unsigned long>(-c));
            } else {
                mpz_addmul(sum.get_mpz_t(), av.get_mpz_t(), sup.cbig[k].get_mpz_t());
            }
        }
        mpz_swap(big[n].get_mpz_t(), sum.get_mpz_t());
    }
}

void mul_sparse_inplace(ExactVector& acc, const SparseSupport& sup,
                        std::uint32_t scale) {
    const std::size_t len = acc.size();
    if (len == 0) return;
    if (!acc.small() || !sup.all_i64) {
        acc.promote();
        mul_sparse_big(acc, sup, scale, len - 1);
        return;
    }
    auto& small = acc.small_data();
    for (std::size_t n = len; n-- > 0;) {
        int128 sum = 0;
        bool overflow = false;
        for (std::size_t k = 0; k < sup.idx.size(); ++k) {
            const std::size_t off = sup.idx[k] * scale;
            if (off > n) break;
            const int128 av = small[n - off];
            if (av == 0) continue;
            const std::int64_t c = sup.c64[k];
            int128 term;
            if (c == 1) {
                term = av;
            } else if (c == -1) {
                if (__builtin_sub_overflow(static_cast<int128>(0), av, &term)) {
                    overflow = true;
                    break;
                }
            } else if (mul_checked(av, static_cast<int128>(c), &term)) {
                overflow = true;
                break;
            }
            if (add_checked(sum, term, &sum)) {
                overflow = true;
                break;
            }
        }
        if (overflow) {
            // positions above n are final, positions <= n still original;
            // promotion preserves both, then the big kernel finishes the tail
            acc.promote();
            mul_sparse_big(acc, sup, scale, n);
            return;
        }
        small[n] = sum;
    }
}

mpz_class pack_kronecker(const IntSeries& x, std::size_t words_per_slot) {
    const std::size_t len = x.length();
    const std::size_t W = words_per_slot;
    std::vector<std::uint64_t> pos(len * W, 0), neg(len * W, 0);
    bool any_pos = false, any_neg = false;
    if (x.coeffs().small()) {
        const auto& small = x.coeffs().small_data();
        for (std::size_t i = 0; i < len; ++i) {
            const int128 v = small[i];
            if (v == 0) continue;
            unsigned __int128 u = v < 0 ? -static_cast<unsigned __int128>(v)
                                        : static_cast<unsigned __int128>(v);
            auto* dst = (v > 0) ? pos.data() : neg.data();
            (v > 0 ? any_pos : any_neg) = true;
            dst[i * W] = static_cast<std::uint64_t>(u);
            if (W > 1) dst[i * W + 1] = static_cast<std::uint64_t>(u >> 64);
        }
    } else {
        const auto& big = x.coeffs().big_data();
        for (std::size_t i = 0; i < len; ++i) {
            const int s = sgn(big[i]);
            if (s == 0) continue;
            auto* dst = (s > 0) ? pos.data() : neg.data();
            (s > 0 ? any_pos : any_neg) = true;
            std::size_t count = 0;
            mpz_export(dst + i * W, &count, -1, sizeof(std::uint64_t), 0, 0,
                       big[i].get_mpz_t());
        }
    }
    mpz_class packed = 0;
    if (any_pos)
        mpz_import(packed.get_mpz_t(), pos.size(), -1, sizeof(std::uint64_t), 0, 0,
                   pos.data());
    if (any_neg) {
        mpz_class negv;
        mpz_import(negv.get_mpz_t(), neg.size(), -1, sizeof(std::uint64_t), 0, 0,
                   neg.data());
        packed -= negv;
    }
    return packed;
}

} // namespace

IntSeries euler_product_sparse(std::size_t trunc) {
    IntSeries out(trunc);
    out.set_i64(0, 1);
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t g1 = k * (3 * k - 1) / 2;
        if (g1 > trunc) break;
        const std::int64_t sign = (k % 2 == 1) ? -1 : 1;
        out.set_i64(g1, sign);
        const std::uint64_t g2 = k * (3 * k + 1) / 2;
        if (g2 <= trunc) out.set_i64(g2, sign);
    }
    return out;
}

IntSeries mul_dense_sparse(const IntSeries& a, const IntSeries& s,
                           std::uint32_t scale) {
    if (a.trunc() != s.trunc())
        throw UsageError("mul_dense_sparse: mismatched truncation");
    if (scale == 0) throw UsageError("mul_dense_sparse: scale must be >= 1");
    SparseSupport sup = extract_support(s, s.trunc() / scale);
    IntSeries out = a;
    mul_sparse_inplace(out.coeffs(), sup, scale);
    return out;
}

IntSeries mul_schoolbook(const IntSeries& a, const IntSeries& b) {
    if (a.trunc() != b.trunc())
        throw UsageError("mul: mismatched truncation");
    const std::size_t T = a.trunc();
    IntSeries out(T);

    const int bits_a = a.coeffs().max_bit_length();
    const int bits_b = b.coeffs().max_bit_length();
    const bool small_ok = a.coeffs().small() && b.coeffs().small() &&
                          bits_a + bits_b + ceil_log2(T + 1) <= 126;
    if (small_ok) {
        const auto& av = a.coeffs().small_data();
        const auto& bv = b.coeffs().small_data();
        auto& cv = out.coeffs().small_data();
        for (std::size_t i = 0; i <= T; ++i) {
            if (av[i] == 0) continue;
            const int128 ai = av[i];
            for (std::size_t j = 0; j + i <= T; ++j) cv[i + j] += ai * bv[j];
        }
        return out;
    }

    std::vector<mpz_class> av(T + 1), bv(T + 1);
    for (std::size_t i = 0; i <= T; ++i) {
        av[i] = a.get(i);
        bv[i] = b.get(i);
    }
    out.coeffs().promote();
    auto& cv = out.coeffs().big_data();
    for (std::size_t i = 0; i <= T; ++i) {
        if (sgn(av[i]) == 0) continue;
        for (std::size_t j = 0; j + i <= T; ++j) {
            if (sgn(bv[j]) == 0) continue;
            mpz_addmul(cv[i + j].get_mpz_t(), av[i].get_mpz_t(), bv[j].get_mpz_t());
        }
    }
    return out;
}

IntSeries mul_kronecker(const IntSeries& a, const IntSeries& b) {
    if (a.trunc() != b.trunc())
        throw UsageError("mul: mismatched truncation");
    const std::size_t T = a.trunc();
    IntSeries out(T);

    const int bits_a = a.coeffs().max_bit_length();
    const int bits_b = b.coeffs().max_bit_length();
    if (bits_a == 0 || bits_b == 0) return out;

    // |conv coefficient| < 2^(bits_a + bits_b + log2(len)), slot keeps one
    // spare bit for the sign offset; round up to whole 64-bit words so slots
    // align with GMP limbs.
    const int payload = bits_a + bits_b + ceil_log2(T + 1) + 2;
    const std::size_t W = (static_cast<std::size_t>(payload) + 63) / 64;
    const std::size_t slot_bits = W * 64;

    const mpz_class pa = pack_kronecker(a, W);
    const mpz_class pb = pack_kronecker(b, W);
    mpz_class prod = pa * pb;

    // Add 2^(slot_bits-1) to every slot: all slot digits become non-negative,
    // so no borrows cross slot boundaries and each can be read independently.
    const std::size_t len_c = 2 * T + 1;
    {
        std::vector<std::uint64_t> offs(len_c * W, 0);
        for (std::size_t i = 0; i < len_c; ++i)
            offs[(i + 1) * W - 1] = 1ULL << 63;
        mpz_class offset;
        mpz_import(offset.get_mpz_t(), offs.size(), -1, sizeof(std::uint64_t), 0, 0,
                   offs.data());
        prod += offset;
    }

    std::vector<std::uint64_t> limbs(len_c * W, 0);
    std::size_t count = 0;
    mpz_export(limbs.data(), &count, -1, sizeof(std::uint64_t), 0, 0,
               prod.get_mpz_t());

    mpz_class half;
    mpz_ui_pow_ui(half.get_mpz_t(), 2, static_cast<unsigned long>(slot_bits - 1));

    out.coeffs().promote();
    auto& cv = out.coeffs().big_data();
    mpz_class slot;
    for (std::size_t n = 0; n <= T; ++n) {
        mpz_import(slot.get_mpz_t(), W, -1, sizeof(std::uint64_t), 0, 0,
                   limbs.data() + n * W);
        slot -= half;
        mpz_swap(cv[n].get_mpz_t(), slot.get_mpz_t());
    }
    return out;
}

IntSeries mul(const IntSeries& a, const IntSeries& b) {
    if (a.trunc() != b.trunc())
        throw UsageError("mul: mismatched truncation");
    return a.length() >= 128 ? mul_kronecker(a, b) : mul_schoolbook(a, b);
}

std::int64_t EtaQuotient::weight_sum() const {
    std::int64_t sum = 0;
    for (const Factor& f : factors)
        sum += static_cast<std::int64_t>(f.scale) * f.exponent;
    return sum;
}

std::uint64_t EtaQuotient::leading_power() const {
    return static_cast<std::uint64_t>(weight_sum() / 24);
}

IntSeries eta_quotient_expand(const EtaQuotient& eq, std::size_t trunc) {
    for (const auto& f : eq.factors) {
        if (f.exponent <= 0)
            throw UnsupportedError("eta_quotient_expand: only positive exponents "
                                   "are supported");
        if (f.scale == 0)
            throw UnsupportedError("eta_quotient_expand: scale must be >= 1");
    }
    const std::int64_t ws = eq.weight_sum();
    if (ws % 24 != 0)
        throw UnsupportedError("eta_quotient_expand: sum of scale*exponent "
                               "must be divisible by 24");
    const std::uint64_t lead = static_cast<std::uint64_t>(ws / 24);
    if (trunc < lead)
        throw UsageError("eta_quotient_expand: trunc below leading power");

    const std::size_t prod_trunc = trunc - lead;
    ExactVector prod(prod_trunc + 1);
    prod.set_i64(0, 1);
    const SparseSupport sup = pentagonal_support(prod_trunc);
    for (const auto& f : eq.factors)
        for (std::int32_t t = 0; t < f.exponent; ++t)
            mul_sparse_inplace(prod, sup, f.scale);

    IntSeries out(trunc);
    if (prod.small()) {
        auto& dst = out.coeffs().small_data();
        const auto& src = prod.small_data();
        for (std::size_t i = 0; i < src.size(); ++i) dst[lead + i] = src[i];
    } else {
        out.coeffs().promote();
        auto& dst = out.coeffs().big_data();
        auto& src = prod.big_data();
        for (std::size_t i = 0; i < src.size(); ++i)
            mpz_swap(dst[lead + i].get_mpz_t(), src[i].get_mpz_t());
    }
    return out;
}

IntSeries eisenstein(int k, std::size_t trunc) {
    if (k != 4 && k != 6)
        throw UnsupportedError("eisenstein: only k = 4 and k = 6 are supported");
    const int power = (k == 4) ? 3 : 5;
    const std::int64_t scale = (k == 4) ? 240 : -504;

    IntSeries out(trunc);
    bool overflow = false;
    {
        auto& cv = out.coeffs().small_data();
        for (std::size_t d = 1; d <= trunc && !overflow; ++d) {
            int128 dp = 1;
            for (int t = 0; t < power && !overflow; ++t)
                overflow = mul_checked(dp, static_cast<int128>(d), &dp);
            if (overflow) break;
            for (std::size_t m = d; m <= trunc; m += d)
                if (add_checked(cv[m], dp, &cv[m])) {
                    overflow = true;
                    break;
                }
        }
        if (!overflow) {
            for (std::size_t n = 1; n <= trunc && !overflow; ++n)
                if (mul_checked(cv[n], static_cast<int128>(scale), &cv[n]))
                    overflow = true;
        }
    }
    if (overflow) {
        // redo in exact big integers; only reachable for very large trunc
        IntSeries big(trunc);
        big.coeffs().promote();
        auto& cv = big.coeffs().big_data();
        mpz_class dp;
        for (std::size_t d = 1; d <= trunc; ++d) {
            mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d),
                          static_cast<unsigned long>(power));
            for (std::size_t m = d; m <= trunc; m += d)
                cv[m] += dp;
        }
        for (std::size_t n = 1; n <= trunc; ++n) cv[n] *= static_cast<long>(scale);
        cv[0] = 1;
        return big;
    }
    out.set_i64(0, 1);
    return out;
}

} // namespace signlab::qs
