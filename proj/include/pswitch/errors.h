#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pswitch {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An argument violated an operation's precondition (probability outside
/// (0,1), unsupported q, malformed pswitch set, ...).
class DomainError : public Error {
   public:
    using Error::Error;
};

/// A configured enumeration/factoring cap would be exceeded.
class ResourceLimitError : public Error {
   public:
    using Error::Error;
};

/// Rational is not of the form b/q^w for any w up to the configured cap.
class NotQAdicError : public DomainError {
   public:
    using DomainError::DomainError;
};

/// Backward synthesis found no pswitch that lowers the characteristic function.
class NoProgressError : public Error {
   public:
    using Error::Error;
};

/// Circuit text could not be parsed. Line and column are 1-based.
class SyntaxError : public Error {
   public:
    SyntaxError(const std::string &message, size_t line, size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {
    }

    size_t line() const {
        return line_;
    }
    size_t column() const {
        return column_;
    }

   private:
    size_t line_;
    size_t column_;
};

}  // namespace pswitch
