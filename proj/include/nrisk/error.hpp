#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nrisk {

/// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document. Carries the 1-based line and, when known, the field name.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : Error(locate(line, field) + what), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string locate(std::size_t line, const std::string& field) {
        std::string s = "line " + std::to_string(line);
        if (!field.empty()) s += ", field '" + field + "'";
        return s + ": ";
    }

    std::size_t line_;
    std::string field_;
};

/// A value parsed fine but violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (altitude, pressure, energy ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inputs are in range but the linear model would produce a non-physical result.
class ModelValidityError : public DomainError {
public:
    using DomainError::DomainError;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

}  // namespace nrisk
