#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace signlab {

using int128 = __int128;

mpz_class mpz_from_i128(int128 v);
bool mpz_fits_i128(const mpz_class& v);
int128 mpz_to_i128(const mpz_class& v); // caller guarantees mpz_fits_i128
int bit_length_i128(int128 v);          // bits of |v|, 0 for v = 0

// Exact signed integer vector. Values live in 128-bit words while they fit
// and spill to GMP integers on the first overflow; arithmetic stays exact in
// either representation. Kernels branch once on small() and work on the raw
// storage directly.
class ExactVector {
  public:
    ExactVector() = default;
    explicit ExactVector(std::size_t n) : small_(n, 0) {}

    std::size_t size() const { return is_small_ ? small_.size() : big_.size(); }
    bool small() const { return is_small_; }

    mpz_class get(std::size_t i) const {
        return is_small_ ? mpz_from_i128(small_[i]) : big_[i];
    }
    double get_double(std::size_t i) const {
        return is_small_ ? static_cast<double>(small_[i]) : big_[i].get_d();
    }
    int sign_at(std::size_t i) const {
        if (is_small_) return small_[i] > 0 ? 1 : (small_[i] < 0 ? -1 : 0);
        return sgn(big_[i]);
    }
    void set(std::size_t i, const mpz_class& v) {
        if (is_small_) {
            if (mpz_fits_i128(v)) {
                small_[i] = mpz_to_i128(v);
                return;
            }
            promote();
        }
        big_[i] = v;
    }
    void set_i64(std::size_t i, std::int64_t v) {
        if (is_small_)
            small_[i] = v;
        else
            big_[i] = static_cast<long>(v);
    }

    void promote(); // switch to mpz storage, preserving values
    void resize(std::size_t n);

    std::vector<int128>& small_data() { return small_; }
    const std::vector<int128>& small_data() const { return small_; }
    std::vector<mpz_class>& big_data() { return big_; }
    const std::vector<mpz_class>& big_data() const { return big_; }

    int max_bit_length() const; // bits of the largest |value|

    bool operator==(const ExactVector& other) const;

  private:
    bool is_small_ = true;
    std::vector<int128> small_;
    std::vector<mpz_class> big_;
};

} // namespace signlab
