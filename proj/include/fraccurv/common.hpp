#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraccurv {

// Numeric/domain failures (evaluating outside a function's domain,
// non-positive-definite metrics, overflow of the working precision).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public DomainError {
public:
    using DomainError::DomainError;
};

class InvalidParameter : public DomainError {
public:
    using DomainError::DomainError;
};

class NotPositiveDefinite : public DomainError {
public:
    using DomainError::DomainError;
};

// Syntax error with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& msg)
        : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

class UnboundParameter : public std::runtime_error {
public:
    explicit UnboundParameter(const std::string& name)
        : std::runtime_error("unbound parameter: " + name), name(name) {}
    std::string name;
};

// A numerical limit failed to stabilize; carries the final two samples.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& msg, double prev, double last)
        : std::runtime_error(msg + " (last two samples: " + std::to_string(prev)
                             + ", " + std::to_string(last) + ")"),
          prev(prev), last(last) {}
    double prev;
    double last;
};

// A trajectory left the metric's domain; carries the path computed so far.
class DomainExit : public std::runtime_error {
public:
    DomainExit(const std::string& msg, std::vector<std::vector<double>> partial)
        : std::runtime_error(msg), partial_path(std::move(partial)) {}
    std::vector<std::vector<double>> partial_path;
};

}  // namespace fraccurv
