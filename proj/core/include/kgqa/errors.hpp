#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgqa {

// Base class for every error the library raises.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (triple files, datasets, model output literals).
// Carries a 1-based line number when one is known; 0 means "not line-addressed".
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Dataset rows that parse as JSON but violate the example schema.
class SchemaError : public ParseError {
public:
    using ParseError::ParseError;
};

// Prompt template problems: unknown, missing, or extra placeholder.
class TemplateError : public Error {
public:
    TemplateError(const std::string& what, std::string field)
        : Error(what + ": " + field), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// A precondition of an operation was violated by the caller.
class ContractViolation : public Error {
public:
    using Error::Error;
};

// Bad user-supplied input (missing topics, invalid flag combinations, ...).
class InputError : public Error {
public:
    using Error::Error;
};

// A loaded triple file produced no triples at all.
class EmptyGraphError : public Error {
public:
    using Error::Error;
};

// An LLM completion came back empty where text is required.
class EmptyCompletionError : public Error {
public:
    using Error::Error;
};

// Backend failures. TransportError is retryable; the others are not.
class BackendError : public Error {
public:
    using Error::Error;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

// Raised once the retry budget for transient failures is spent.
class BackendUnavailable : public BackendError {
public:
    using BackendError::BackendError;
};

}  // namespace kgqa
