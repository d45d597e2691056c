#include "adi/errors.hpp"

namespace adi {

Error::Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

namespace {
std::string located(const std::string& source, std::size_t line, const std::string& message) {
    if (line == 0) return source + ": " + message;
    return source + ":" + std::to_string(line) + ": " + message;
}
}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : DataError(located(source, line, message)), line_(line) {}

}  // namespace adi
