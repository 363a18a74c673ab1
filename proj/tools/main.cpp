#include <CLI11.hpp>

#include "signlab/cli.hpp"

int main(int argc, char** argv) {
    signlab::cli::RunConfig cfg;

    CLI::App app{"exact eigenform coefficients, q-exponents and sign-change "
                 "experiments"};
    app.fallthrough();
    app.set_config("--config", "", "flat key=value config file; flags override");

    app.add_option("--form", cfg.form, "form id (delta,e16,e18,e20,e22,e26,n11,n14,n15)")
        ->capture_default_str();
    app.add_option("--limit", cfg.limit, "coefficient table limit");
    app.add_option("--power", cfg.power, "the j of lambda(n^j), in {1,2,3,4}")
        ->capture_default_str();
    app.add_option("--mode", cfg.mode, "scan source: lambda | cprime")
        ->capture_default_str();
    app.add_option("--x0", cfg.x0, "first window start")->capture_default_str();
    app.add_option("--windows", cfg.windows, "number of dyadic windows")
        ->capture_default_str();
    app.add_option("--window-mode", cfg.window_mode,
                   "dyadic | pow:<a> | explog:<A>")
        ->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
    app.add_option("--cache-dir", cfg.cache_dir, "coefficient cache directory")
        ->envname("SIGNLAB_CACHE_DIR");
    app.add_option("--threads", cfg.threads, "worker threads for window scans")
        ->capture_default_str();
    app.add_flag("--svg", cfg.svg, "also write an SVG log-log chart");
    app.add_option("--suite", cfg.suite,
                   "verify filter: all | numtheory | qseries | eigenforms | gmf "
                   "| signlab")
        ->capture_default_str();

    auto* coeffs =
        app.add_subcommand("coeffs", "generate exact coefficients; write CSV + cache");
    auto* gmfcmd =
        app.add_subcommand("gmf", "export q-exponents m(n) = n c(n) of a weight-2 form");
    auto* signchanges =
        app.add_subcommand("signchanges", "count sign changes over a window grid");
    auto* primesums =
        app.add_subcommand("primesums", "weighted prime sums S1, S2 and C2");
    auto* fit = app.add_subcommand("fit", "fit log(count) vs log(x) over the grid");
    auto* verify = app.add_subcommand("verify", "run the cross-module invariant suite");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : signlab::cli::kExitUsage;
    }

    if (*coeffs) return signlab::cli::cmd_coeffs(cfg);
    if (*gmfcmd) return signlab::cli::cmd_gmf(cfg);
    if (*signchanges) return signlab::cli::cmd_signchanges(cfg);
    if (*primesums) return signlab::cli::cmd_primesums(cfg);
    if (*fit) return signlab::cli::cmd_fit(cfg);
    if (*verify) return signlab::cli::cmd_verify(cfg);
    return signlab::cli::kExitUsage;
}
