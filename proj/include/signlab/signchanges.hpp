#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "signlab/eigenforms.hpp"
#include "signlab/gmf.hpp"

namespace signlab {

struct SignEntry {
    std::uint64_t index;
    int sign; // -1, 0, +1, sourced from exact integers
};

// A sequence of exact signs over an index window. cover_lo/cover_hi describe
// the range the series knows about: entries may be sparse inside it (primes),
// but nothing outside it may be queried.
struct SignSeries {
    std::string domain; // "n" or "primes", label only
    std::uint64_t cover_lo = 1;
    std::uint64_t cover_hi = 0;
    std::vector<SignEntry> entries; // indices strictly increasing
};

struct SignChangeReport {
    double x = 0, h = 0; // the window (x, x+h]
    std::uint64_t count = 0;
    std::uint64_t zeros_seen = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> positions;
};

// Counts pairs of consecutive nonzero-sign entries with opposite signs, both
// indices in (x, x+h]. Zeros are skipped: they neither break nor create a
// change.
SignChangeReport count_sign_changes(const SignSeries& s, double x, double h);

struct WindowSpec {
    double x, h;
};

enum class WindowMode { dyadic, pow, explog };

// Windows on the dyadic grid x = x0 * 2^t, t = 0..count-1, with h chosen by
// mode: dyadic h = x, pow h = x^param, explog h = x / exp(param*sqrt(log x)).
std::vector<WindowSpec> make_windows(WindowMode mode, double param, double x0,
                                     int count);

// One report per window; by-index merge keeps results deterministic under
// any thread count.
std::vector<SignChangeReport> scan_windows(const SignSeries& s,
                                           const std::vector<WindowSpec>& windows,
                                           int threads = 1);

std::vector<SignChangeReport> dyadic_sign_change_scan(const SignSeries& s,
                                                      double x0, int window_count,
                                                      int threads = 1);

// Sign series of lambda(n^j) for n = lo..hi (all signs from exact a(n^j)).
SignSeries lambda_sign_series(const forms::CoefficientTable& t, int j,
                              std::uint64_t lo, std::uint64_t hi);

// Sign series of c'(p) over primes p <= hi (signs of the exact m(p) = 1-b(p)).
SignSeries cprime_sign_series(const gmf::ExponentTable& exp, std::uint64_t hi);

struct ExponentFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
    std::size_t points_used = 0;
};

// Least-squares slope of log(count) against log(x). Points with count = 0
// carry no information on a log scale and are rejected; fewer than two usable
// points is an error.
ExponentFit fit_exponent(const std::vector<std::pair<double, std::uint64_t>>& points);

} // namespace signlab
