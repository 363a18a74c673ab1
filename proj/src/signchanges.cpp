#include "signlab/signchanges.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "signlab/errors.hpp"

namespace signlab {

SignChangeReport count_sign_changes(const SignSeries& s, double x, double h) {
    if (!(x >= 0) || !(h > 0))
        throw UsageError("count_sign_changes: need x >= 0 and h > 0");
    SignChangeReport report;
    report.x = x;
    report.h = h;

    const std::uint64_t lo = static_cast<std::uint64_t>(std::floor(x)) + 1;
    const std::uint64_t hi = static_cast<std::uint64_t>(std::floor(x + h));
    if (hi < lo) return report; // empty integer window

    if (s.cover_lo > lo || s.cover_hi < hi)
        throw InsufficientDataError(
            "count_sign_changes: series covers [" + std::to_string(s.cover_lo) +
            ", " + std::to_string(s.cover_hi) + "], window needs [" +
            std::to_string(lo) + ", " + std::to_string(hi) + "]");

    auto it = std::lower_bound(s.entries.begin(), s.entries.end(), lo,
                               [](const SignEntry& e, std::uint64_t v) {
                                   return e.index < v;
                               });
    int prev_sign = 0;
    std::uint64_t prev_index = 0;
    for (; it != s.entries.end() && it->index <= hi; ++it) {
        if (it->sign == 0) {
            ++report.zeros_seen;
            continue;
        }
        if (prev_sign != 0 && it->sign != prev_sign) {
            ++report.count;
            report.positions.emplace_back(prev_index, it->index);
        }
        prev_sign = it->sign;
        prev_index = it->index;
    }
    return report;
}

std::vector<WindowSpec> make_windows(WindowMode mode, double param, double x0,
                                     int count) {
    if (!(x0 > 0) || count < 1)
        throw UsageError("make_windows: need x0 > 0 and count >= 1");
    std::vector<WindowSpec> out;
    out.reserve(static_cast<std::size_t>(count));
    double x = x0;
    for (int t = 0; t < count; ++t, x *= 2) {
        double h = 0;
        switch (mode) {
        case WindowMode::dyadic: h = x; break;
        case WindowMode::pow: h = std::pow(x, param); break;
        case WindowMode::explog:
            h = x / std::exp(param * std::sqrt(std::log(x)));
            break;
        }
        out.push_back({x, h});
    }
    return out;
}

std::vector<SignChangeReport> scan_windows(const SignSeries& s,
                                           const std::vector<WindowSpec>& windows,
                                           int threads) {
    std::vector<SignChangeReport> reports(windows.size());
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(windows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < windows.size(); ++i)
            reports[i] = count_sign_changes(s, windows[i].x, windows[i].h);
        return reports;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= windows.size()) return;
            try {
                reports[i] = count_sign_changes(s, windows[i].x, windows[i].h);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return reports;
}

std::vector<SignChangeReport> dyadic_sign_change_scan(const SignSeries& s,
                                                      double x0, int window_count,
                                                      int threads) {
    return scan_windows(s, make_windows(WindowMode::dyadic, 0.0, x0, window_count),
                        threads);
}

SignSeries lambda_sign_series(const forms::CoefficientTable& t, int j,
                              std::uint64_t lo, std::uint64_t hi) {
    if (lo < 1 || hi < lo) throw UsageError("lambda_sign_series: bad range");
    SignSeries s;
    s.domain = "n";
    s.cover_lo = lo;
    s.cover_hi = hi;
    s.entries.reserve(hi - lo + 1);
    forms::HeckeEvaluator ev(t);
    if (hi <= 0xffffffffULL) {
        const nt::SpfTable spf(static_cast<std::uint32_t>(hi));
        for (std::uint64_t n = lo; n <= hi; ++n)
            s.entries.push_back({n, ev.lambda_power(spf.factorize(n), j).sign});
    } else {
        for (std::uint64_t n = lo; n <= hi; ++n)
            s.entries.push_back({n, ev.lambda_power(n, j).sign});
    }
    return s;
}

SignSeries cprime_sign_series(const gmf::ExponentTable& exp, std::uint64_t hi) {
    if (hi > exp.limit())
        throw InsufficientDataError("cprime_sign_series: exponent table ends at " +
                                    std::to_string(exp.limit()));
    SignSeries s;
    s.domain = "primes";
    s.cover_lo = 1;
    s.cover_hi = hi;
    for (std::uint64_t p : nt::sieve_primes(hi))
        s.entries.push_back({p, exp.sign_m(p)});
    return s;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, std::uint64_t>>& points) {
    std::vector<std::pair<double, double>> usable;
    for (const auto& [x, count] : points) {
        if (count == 0) continue;
        if (!(x > 0)) throw UsageError("fit_exponent: x values must be positive");
        usable.emplace_back(std::log(x), std::log(static_cast<double>(count)));
    }
    if (usable.size() < 2)
        throw InsufficientDataError("fit_exponent: need at least 2 points with "
                                    "count >= 1");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [lx, ly] : usable) {
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(usable.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0)
        throw InsufficientDataError("fit_exponent: degenerate abscissae");
    ExponentFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.points_used = usable.size();
    for (const auto& [lx, ly] : usable)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ly - (fit.intercept + fit.slope * lx)));
    return fit;
}

} // namespace signlab
