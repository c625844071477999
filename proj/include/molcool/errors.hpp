#ifndef MOLCOOL_ERRORS_HPP
#define MOLCOOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace molcool {

// Error taxonomy maps onto CLI exit codes: config -> 2, numeric -> 3, io -> 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid quantum numbers, out-of-range arguments and the like.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace molcool

#endif
