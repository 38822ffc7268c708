// errors.hpp - error taxonomy shared by library and CLI.
#pragma once

#include <stdexcept>
#include <string>

namespace hardpair {

// Bad input: malformed particle file, invalid shape parameters, out-of-domain
// request (e.g. canonical map on a degenerate manifold). CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solve failed to converge. Carries whatever bracket/diagnostic
// the solver had at the point of failure in the message. CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hardpair
