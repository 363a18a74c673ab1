#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace signlab::cli {

// One experiment configuration, shared by every subcommand. Flags override
// config-file values; SIGNLAB_CACHE_DIR supplies cache_dir when neither the
// flag nor the config sets it.
struct RunConfig {
    std::string form = "delta";
    std::uint64_t limit = 0; // 0 = derive from the window grid where possible
    int power = 2;           // the j of lambda(n^j)
    std::string mode = "lambda"; // lambda | cprime (scan source)
    double x0 = 16;
    int windows = 8;
    std::string window_mode = "dyadic"; // dyadic | pow:<a> | explog:<A>
    std::string out_dir = ".";
    std::string format = "csv"; // csv | json
    std::string cache_dir;      // empty = no disk cache (coeffs falls back)
    int threads = 1;
    bool svg = false;
    std::string suite = "all"; // verify filter
};

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

int cmd_coeffs(const RunConfig& cfg);
int cmd_gmf(const RunConfig& cfg);
int cmd_signchanges(const RunConfig& cfg);
int cmd_primesums(const RunConfig& cfg);
int cmd_fit(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

// The named invariant checks behind cmd_verify, exposed for tests.
std::vector<CheckResult> run_verify_suite(const RunConfig& cfg);

} // namespace signlab::cli
