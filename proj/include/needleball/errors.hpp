#pragma once

#include <stdexcept>
#include <string>

namespace nb {

// Invalid user-facing configuration (bad flags, bad parameters). CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to meet its contract (eigensolver non-convergence,
// integration tolerance not met, infeasible weight fit). CLI exit code 3.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nb
