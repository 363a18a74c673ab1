#pragma once

#include <stdexcept>
#include <string>

namespace signlab {

// Error taxonomy. The CLI maps categories onto exit codes (usage -> 2,
// capacity/data -> 3), so new failure conditions should reuse one of these.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of the operation (n = 0, p not
// prime, j outside {1..4}, ...).
struct DomainError : Error {
    using Error::Error;
};

// Caller broke an API contract (mismatched truncations, mixed tables, bad
// config values).
struct UsageError : Error {
    using Error::Error;
};

// Request exceeds a configured ceiling (sieve limit, table size).
struct CapacityError : Error {
    using Error::Error;
};

// Tables or series do not cover the requested range.
struct InsufficientDataError : Error {
    using Error::Error;
};

// Eta quotient or form outside the supported family.
struct UnsupportedError : Error {
    using Error::Error;
};

} // namespace signlab
