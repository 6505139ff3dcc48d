#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace procnet {

// Exit-code categories used by the CLI: 1 validation, 2 backend, 3 parse/schema.
enum class ErrorCategory { validation = 1, backend = 2, parse = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string message)
        : std::runtime_error(std::move(message)), category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

// Bad inputs, bad config, violated preconditions.
class ValidationError : public Error {
public:
    explicit ValidationError(std::string message)
        : Error(ErrorCategory::validation, std::move(message)) {}
};

// Unreachable endpoint, non-success HTTP status, timeout.
class TransportError : public Error {
public:
    explicit TransportError(std::string message)
        : Error(ErrorCategory::backend, std::move(message)) {}
};

// Malformed files or model output that cannot be parsed.
class ParseError : public Error {
public:
    explicit ParseError(std::string message)
        : Error(ErrorCategory::parse, std::move(message)) {}
};

// Structured output still invalid after all repair retries.
// Carries every raw attempt so failures can be audited.
class SchemaError : public Error {
public:
    SchemaError(std::string message, std::vector<std::string> attempts)
        : Error(ErrorCategory::parse, std::move(message)), attempts_(std::move(attempts)) {}

    const std::vector<std::string>& attempts() const { return attempts_; }

private:
    std::vector<std::string> attempts_;
};

}  // namespace procnet
