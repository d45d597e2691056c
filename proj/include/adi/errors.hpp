#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adi {

/// Coarse error families. The CLI maps each to its own exit code.
enum class ErrorKind { configuration, data, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error(ErrorKind::configuration, message) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error(ErrorKind::data, message) {}
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

class LookupError : public DataError {
public:
    using DataError::DataError;
};

class UnsupportedVersionError : public DataError {
public:
    using DataError::DataError;
};

/// Malformed file content. `line()` is 1-based; 0 when the problem is not tied to a line.
class ParseError : public DataError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& message) : Error(ErrorKind::numerical, message) {}
};

class EstimationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Weighted localization needs at least two transducers above the null level.
class LocalizationUndefinedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace adi
