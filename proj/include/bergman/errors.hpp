#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: unparsable files, incompatible flags, malformed configs.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Violated mathematical preconditions or failed numeric contracts:
// broken invariants, singular divisions, unstable quadrature.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Division by a series with vanishing constant term, or a singular
// constant-term matrix where a unit was required.
class SingularDivisionError : public ValidationError {
public:
    explicit SingularDivisionError(const std::string& msg) : ValidationError(msg) {}
};

// Quadrature failed its self-consistency check under node doubling.
class ResolutionError : public ValidationError {
public:
    explicit ResolutionError(const std::string& msg) : ValidationError(msg) {}
};

// An operation needs more truncation degree than its inputs carry.
class DegreeBudgetError : public Error {
public:
    DegreeBudgetError(const std::string& msg, int required)
        : Error(msg), required_degree(required) {}
    int required_degree;
};

} // namespace bergman
