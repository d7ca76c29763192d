#pragma once

#include <stdexcept>
#include <string>

namespace skewdyn {

// Bad user input: malformed config, invalid map family, out-of-range options.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A work cap was exceeded (tree size, composition degree, raster size).
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: root finder did not converge, overflow, degenerate map.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace skewdyn
