#include "signlab/exact_vector.hpp"

#include <algorithm>

namespace signlab {

mpz_class mpz_from_i128(int128 v) {
    const bool neg = v < 0;
    // -2^127 negates to itself in two's complement; go through unsigned.
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                              : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(u >> 64));
    mpz_class out = (hi << 64) + static_cast<unsigned long>(u);
    return neg ? mpz_class(-out) : out;
}

bool mpz_fits_i128(const mpz_class& v) {
    if (sgn(v) == 0) return true;
    const std::size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
    return bits <= 127; // |v| <= 2^127 - 1 either sign; skip the -2^128 corner
}

int128 mpz_to_i128(const mpz_class& v) {
    const int s = sgn(v);
    if (s == 0) return 0;
    mpz_class a = abs(v);
    mpz_class lo = a & mpz_class((unsigned long)0xffffffffffffffffUL);
    mpz_class hi = a >> 64;
    unsigned __int128 u = (static_cast<unsigned __int128>(hi.get_ui()) << 64) |
                          lo.get_ui();
    return s > 0 ? static_cast<int128>(u) : -static_cast<int128>(u);
}

int bit_length_i128(int128 v) {
    if (v == 0) return 0;
    unsigned __int128 u = v < 0 ? -static_cast<unsigned __int128>(v)
                                : static_cast<unsigned __int128>(v);
    const auto hi = static_cast<std::uint64_t>(u >> 64);
    if (hi) return 128 - __builtin_clzll(hi);
    return 64 - __builtin_clzll(static_cast<std::uint64_t>(u));
}

void ExactVector::promote() {
    if (!is_small_) return;
    big_.resize(small_.size());
    for (std::size_t i = 0; i < small_.size(); ++i) big_[i] = mpz_from_i128(small_[i]);
    small_.clear();
    small_.shrink_to_fit();
    is_small_ = false;
}

void ExactVector::resize(std::size_t n) {
    if (is_small_)
        small_.resize(n, 0);
    else
        big_.resize(n);
}

int ExactVector::max_bit_length() const {
    int bits = 0;
    if (is_small_) {
        for (int128 v : small_) bits = std::max(bits, bit_length_i128(v));
    } else {
        for (const mpz_class& v : big_)
            if (sgn(v) != 0)
                bits = std::max(bits, static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2)));
    }
    return bits;
}

bool ExactVector::operator==(const ExactVector& other) const {
    if (size() != other.size()) return false;
    if (is_small_ && other.is_small_) return small_ == other.small_;
    for (std::size_t i = 0; i < size(); ++i)
        if (get(i) != other.get(i)) return false;
    return true;
}

} // namespace signlab
