#include "signlab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "signlab/eigenforms.hpp"
#include "signlab/errors.hpp"
#include "signlab/format.hpp"
#include "signlab/gmf.hpp"
#include "signlab/moments.hpp"
#include "signlab/signchanges.hpp"
#include "signlab/svg.hpp"

namespace signlab::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

int guard(const char* what, const std::function<int()>& body) {
    try {
        return body();
    } catch (const CapacityError& e) {
        std::cerr << what << ": " << e.what() << '\n';
        return kExitCapacity;
    } catch (const InsufficientDataError& e) {
        std::cerr << what << ": " << e.what() << '\n';
        return kExitCapacity;
    } catch (const Error& e) {
        std::cerr << what << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << what << ": " << e.what() << '\n';
        return kExitUsage;
    }
}

const forms::FormSpec& require_form(const RunConfig& cfg) {
    const forms::FormSpec* spec = forms::find_form(cfg.form);
    if (spec == nullptr) throw UsageError("unknown form: " + cfg.form);
    return *spec;
}

void validate_common(const RunConfig& cfg) {
    if (cfg.threads < 1) throw UsageError("threads must be >= 1");
    if (cfg.format != "csv" && cfg.format != "json")
        throw UsageError("format must be csv or json");
    if (cfg.power < 1 || cfg.power > 4)
        throw UsageError("power must be in {1,2,3,4}");
}

std::optional<fs::path> cache_dir_of(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return fs::path(cfg.cache_dir);
    return std::nullopt;
}

std::ofstream open_output(const fs::path& file) {
    if (!file.parent_path().empty()) fs::create_directories(file.parent_path());
    std::ofstream os(file);
    if (!os) throw UsageError("cannot open output file: " + file.string());
    return os;
}

struct ParsedWindowMode {
    WindowMode mode;
    double param;
};

ParsedWindowMode parse_window_mode(const std::string& s) {
    if (s == "dyadic") return {WindowMode::dyadic, 0.0};
    if (s.rfind("pow:", 0) == 0) {
        const double a = std::stod(s.substr(4));
        if (!(a > 0)) throw UsageError("window-mode pow:<a> needs a > 0");
        return {WindowMode::pow, a};
    }
    if (s.rfind("explog:", 0) == 0) {
        const double A = std::stod(s.substr(7));
        if (!(A > 0)) throw UsageError("window-mode explog:<A> needs A > 0");
        return {WindowMode::explog, A};
    }
    throw UsageError("window-mode must be dyadic, pow:<a> or explog:<A>");
}

struct ScanOutput {
    std::vector<SignChangeReport> reports;
    std::string series_tag;                  // lambda_j<j> or cprime
    std::optional<double> reference_exponent; // delta_j for lambda runs
};

ScanOutput run_scan(const RunConfig& cfg) {
    validate_common(cfg);
    if (cfg.windows < 1) throw UsageError("windows must be >= 1");
    if (!(cfg.x0 > 0)) throw UsageError("x0 must be positive");
    if (cfg.mode != "lambda" && cfg.mode != "cprime")
        throw UsageError("mode must be lambda or cprime");
    const forms::FormSpec& spec = require_form(cfg);
    const ParsedWindowMode wm = parse_window_mode(cfg.window_mode);
    const std::vector<WindowSpec> windows =
        make_windows(wm.mode, wm.param, cfg.x0, cfg.windows);

    double cover_f = 0;
    for (const WindowSpec& w : windows) cover_f = std::max(cover_f, w.x + w.h);
    const auto cover = static_cast<std::uint64_t>(std::ceil(cover_f));
    if (cover > forms::kTableCeiling)
        throw CapacityError("window grid reaches " + std::to_string(cover) +
                            ", beyond the generable range " +
                            std::to_string(forms::kTableCeiling));
    const std::uint64_t limit = std::max<std::uint64_t>({cfg.limit, cover, 2});

    const forms::CoefficientTable table =
        forms::load_or_generate(spec.id, limit, cache_dir_of(cfg));

    ScanOutput out;
    if (cfg.mode == "lambda") {
        const SignSeries series = lambda_sign_series(table, cfg.power, 1, cover);
        out.reports = scan_windows(series, windows, cfg.threads);
        out.series_tag = "lambda_j" + std::to_string(cfg.power);
        if (cfg.power >= 2) out.reference_exponent = theorem_constants(cfg.power).delta();
    } else {
        const gmf::ExponentTable exponents = gmf::exponents_from_coefficients(table);
        const SignSeries series = cprime_sign_series(exponents, cover);
        out.reports = scan_windows(series, windows, cfg.threads);
        out.series_tag = "cprime";
    }
    return out;
}

std::string pair_str(const SignChangeReport& r, bool first) {
    if (r.positions.empty()) return "-";
    const auto& p = first ? r.positions.front() : r.positions.back();
    return std::to_string(p.first) + ":" + std::to_string(p.second);
}

json pair_json(const SignChangeReport& r, bool first) {
    if (r.positions.empty()) return nullptr;
    const auto& p = first ? r.positions.front() : r.positions.back();
    return json::array({p.first, p.second});
}

json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

} // namespace

int cmd_coeffs(const RunConfig& cfg) {
    return guard("coeffs", [&] {
        validate_common(cfg);
        const forms::FormSpec& spec = require_form(cfg);
        if (cfg.limit < 2) throw UsageError("coeffs needs --limit >= 2");
        // coeffs always persists a cache file; without a configured cache
        // directory it lives next to the CSV under <out>/cache
        auto cache = cache_dir_of(cfg);
        if (!cache) cache = fs::path(cfg.out_dir) / "cache";
        const forms::CoefficientTable table =
            forms::load_or_generate(spec.id, cfg.limit, cache);

        const fs::path out = fs::path(cfg.out_dir) /
                             ("coeffs_" + cfg.form + "_" + std::to_string(cfg.limit) +
                              (cfg.format == "csv" ? ".csv" : ".json"));
        std::ofstream os = open_output(out);
        if (cfg.format == "csv") {
            os << "n,a_n\n";
            for (std::uint64_t n = 1; n <= table.limit(); ++n)
                os << n << ',' << table.a(n).get_str() << '\n';
        } else {
            json rows = json::array();
            for (std::uint64_t n = 1; n <= table.limit(); ++n)
                rows.push_back({{"n", n}, {"a_n", table.a(n).get_str()}});
            os << rows.dump(2) << '\n';
        }
        if (!os) throw UsageError("write failed: " + out.string());
        std::cout << "wrote " << out.string() << '\n';
        return kExitOk;
    });
}

int cmd_gmf(const RunConfig& cfg) {
    return guard("gmf", [&] {
        validate_common(cfg);
        const forms::FormSpec& spec = require_form(cfg);
        if (cfg.limit < 2) throw UsageError("gmf needs --limit >= 2");
        const forms::CoefficientTable table =
            forms::load_or_generate(spec.id, cfg.limit, cache_dir_of(cfg));
        const gmf::ExponentTable exponents = gmf::exponents_from_coefficients(table);

        const fs::path out = fs::path(cfg.out_dir) /
                             ("gmf_" + cfg.form + "_" + std::to_string(cfg.limit) +
                              (cfg.format == "csv" ? ".csv" : ".json"));
        std::ofstream os = open_output(out);
        if (cfg.format == "csv") {
            gmf::write_exponent_csv(exponents, os);
        } else {
            json rows = json::array();
            for (std::uint64_t n = 1; n <= exponents.limit(); ++n)
                rows.push_back({{"n", n},
                                {"m_n", exponents.m(n).get_str()},
                                {"c_n_float", exponents.c(n)}});
            os << rows.dump(2) << '\n';
        }
        if (!os) throw UsageError("write failed: " + out.string());
        std::cout << "wrote " << out.string() << '\n';
        return kExitOk;
    });
}

int cmd_signchanges(const RunConfig& cfg) {
    return guard("signchanges", [&] {
        const ScanOutput scan = run_scan(cfg);
        const std::string stem = "signchanges_" + cfg.form + "_" + scan.series_tag;
        const fs::path out = fs::path(cfg.out_dir) /
                             (stem + (cfg.format == "csv" ? ".csv" : ".json"));
        std::ofstream os = open_output(out);
        if (cfg.format == "csv") {
            os << "x,h,count,zeros_seen,first_pair,last_pair\n";
            for (const auto& r : scan.reports)
                os << fmt_g12(r.x) << ',' << fmt_g12(r.h) << ',' << r.count << ','
                   << r.zeros_seen << ',' << pair_str(r, true) << ','
                   << pair_str(r, false) << '\n';
        } else {
            json rows = json::array();
            for (const auto& r : scan.reports)
                rows.push_back({{"x", r.x},
                                {"h", r.h},
                                {"count", r.count},
                                {"zeros_seen", r.zeros_seen},
                                {"first_pair", pair_json(r, true)},
                                {"last_pair", pair_json(r, false)}});
            os << rows.dump(2) << '\n';
        }
        if (!os) throw UsageError("write failed: " + out.string());
        std::cout << "wrote " << out.string() << '\n';

        if (cfg.svg) {
            const fs::path svg_path = fs::path(cfg.out_dir) / (stem + ".svg");
            std::ofstream svg_os = open_output(svg_path);
            std::vector<std::pair<double, double>> points;
            for (const auto& r : scan.reports)
                points.emplace_back(r.x, static_cast<double>(r.count));
            write_loglog_svg(svg_os, points, scan.reference_exponent,
                             "sign changes per window, " + cfg.form + " " +
                                 scan.series_tag);
            if (!svg_os) throw UsageError("write failed: " + svg_path.string());
            std::cout << "wrote " << svg_path.string() << '\n';
        }
        return kExitOk;
    });
}

int cmd_primesums(const RunConfig& cfg) {
    return guard("primesums", [&] {
        validate_common(cfg);
        if (cfg.windows < 1) throw UsageError("windows must be >= 1");
        if (!(cfg.x0 > 1)) throw UsageError("x0 must be > 1");
        const forms::FormSpec& spec = require_form(cfg);

        const double top = cfg.x0 * std::exp2(cfg.windows - 1);
        const auto needed = static_cast<std::uint64_t>(std::ceil(top));
        if (needed > forms::kTableCeiling)
            throw CapacityError("x grid reaches " + std::to_string(needed) +
                                ", beyond the generable range");
        const std::uint64_t limit = std::max<std::uint64_t>({cfg.limit, needed, 2});
        const forms::CoefficientTable table =
            forms::load_or_generate(spec.id, limit, cache_dir_of(cfg));

        std::vector<PrimeSumReport> rows;
        double x = cfg.x0;
        for (int t = 0; t < cfg.windows; ++t, x *= 2)
            rows.push_back(prime_sums(table, x));

        const fs::path out = fs::path(cfg.out_dir) /
                             ("primesums_" + cfg.form +
                              (cfg.format == "csv" ? ".csv" : ".json"));
        std::ofstream os = open_output(out);
        if (cfg.format == "csv") {
            os << "x,S1,S2,C2,S1_over_x,S2_over_x,C2_logx_over_x\n";
            for (const auto& r : rows)
                os << fmt_g12(r.x) << ',' << fmt_g12(r.s1) << ',' << fmt_g12(r.s2)
                   << ',' << fmt_g12(r.c2) << ',' << fmt_g12(r.s1_over_x) << ','
                   << fmt_g12(r.s2_over_x) << ',' << fmt_g12(r.c2_logx_over_x)
                   << '\n';
        } else {
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"x", r.x},
                               {"S1", r.s1},
                               {"S2", r.s2},
                               {"C2", number_or_null(r.c2)},
                               {"S1_over_x", r.s1_over_x},
                               {"S2_over_x", r.s2_over_x},
                               {"C2_logx_over_x", number_or_null(r.c2_logx_over_x)}});
            os << arr.dump(2) << '\n';
        }
        if (!os) throw UsageError("write failed: " + out.string());
        std::cout << "wrote " << out.string() << '\n';
        return kExitOk;
    });
}

int cmd_fit(const RunConfig& cfg) {
    return guard("fit", [&] {
        const ScanOutput scan = run_scan(cfg);
        std::vector<std::pair<double, std::uint64_t>> points;
        for (const auto& r : scan.reports) points.emplace_back(r.x, r.count);
        const ExponentFit fit = fit_exponent(points);

        json doc;
        doc["series"] = cfg.form + ":" + scan.series_tag;
        json parr = json::array();
        for (const auto& [x, count] : points) parr.push_back(json::array({x, count}));
        doc["points"] = parr;
        doc["slope"] = fit.slope;
        doc["residual"] = fit.max_residual;
        doc["reference_exponent"] = scan.reference_exponent
                                        ? json(*scan.reference_exponent)
                                        : json(nullptr);

        const fs::path out = fs::path(cfg.out_dir) /
                             ("fit_" + cfg.form + "_" + scan.series_tag + ".json");
        std::ofstream os = open_output(out);
        os << doc.dump(2) << '\n';
        if (!os) throw UsageError("write failed: " + out.string());
        std::cout << "wrote " << out.string() << '\n';
        return kExitOk;
    });
}

int cmd_verify(const RunConfig& cfg) {
    return guard("verify", [&] {
        const std::vector<CheckResult> results = run_verify_suite(cfg);
        std::size_t pass = 0, fail = 0;
        json arr = json::array();
        for (const CheckResult& r : results) {
            (r.pass ? pass : fail)++;
            arr.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
            std::cout << (r.pass ? "ok   " : "FAIL ") << r.name
                      << (r.detail.empty() ? "" : "  [" + r.detail + "]") << '\n';
        }
        json doc;
        doc["suite"] = arr;
        doc["pass_count"] = pass;
        doc["fail_count"] = fail;

        const fs::path out = fs::path(cfg.out_dir) / "verify.json";
        std::ofstream os = open_output(out);
        os << doc.dump(2) << '\n';
        if (!os) throw UsageError("write failed: " + out.string());
        std::cout << pass << " passed, " << fail << " failed; wrote "
                  << out.string() << '\n';
        return fail == 0 ? kExitOk : kExitVerifyFailed;
    });
}

} // namespace signlab::cli
