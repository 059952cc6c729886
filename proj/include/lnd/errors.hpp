#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lnd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live over different variable lists.
class VariableMismatch : public Error {
public:
    using Error::Error;
};

/// A variable name that the ring does not know, or a missing substitution image.
class UnknownVariable : public Error {
public:
    using Error::Error;
};

/// Exact division failed. Often a meaningful answer ("not in N"), not a bug.
class NotDivisible : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

/// Nilpotency could not be established within the iteration cap.
class NilpotencyInconclusive : public Error {
public:
    using Error::Error;
};

/// (u* - id) was not nilpotent on the generators within the cap.
class NotUnipotent : public Error {
public:
    using Error::Error;
};

/// A bounded search (plinth, preslice, kernel expression) found nothing.
class SearchExhausted : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

/// A result the theory guarantees failed its own verification.
class InternalFault : public Error {
public:
    using Error::Error;
};

/// A corpus item ran past its work limit.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column),
          message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

}  // namespace lnd
