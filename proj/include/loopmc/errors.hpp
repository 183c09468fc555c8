#pragma once
#include <stdexcept>
#include <string>

namespace loopmc {

// Bad user input (config files, parameter ranges). CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric target (quadrature tolerance, dimension cap) could not be met.
// CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace loopmc
