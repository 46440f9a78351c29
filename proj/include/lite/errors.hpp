// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_ERRORS_HPP
#define LITE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lite {

/// Operand shapes do not fit the operation.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition was violated by the caller.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid optimizer or experiment configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

}  // namespace lite

#endif  // LITE_ERRORS_HPP
