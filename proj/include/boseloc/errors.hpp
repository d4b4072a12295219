#pragma once

#include <stdexcept>
#include <string>

namespace boseloc {

// Error categories map onto the CLI exit codes: config -> 2,
// numerical contract violation -> 3, capacity -> 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace boseloc
