#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simplab {

/// Malformed expression, rule, recurrence or matrix text. `offset` is the
/// byte position in the input where parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnboundVariableError : public std::runtime_error {
public:
    explicit UnboundVariableError(const std::string& name)
        : std::runtime_error("unbound variable '" + name + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// An input exceeds the documented size limit of an exponential algorithm.
class GuardError : public std::runtime_error {
public:
    GuardError(const std::string& algorithm, std::size_t limit, std::size_t requested)
        : std::runtime_error(algorithm + ": n = " + std::to_string(requested) +
                             " exceeds limit " + std::to_string(limit)),
          algorithm_(algorithm), limit_(limit) {}

    const std::string& algorithm() const noexcept { return algorithm_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::string algorithm_;
    std::size_t limit_;
};

/// An internal audit failed: unsound rule, inexact exact-division, disagreeing
/// cross-checks. Never expected on valid input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace simplab
