#pragma once

#include <stdexcept>
#include <string>

namespace medal {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A record violates its schema or an invariant. Carries the offending field.
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Bad or missing configuration (maps to exit code 2 in the CLI).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A model reply that does not follow the expected protocol grammar.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// Backend-side failures.
class BackendError : public Error {
public:
    using Error::Error;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

class AuthError : public BackendError {
public:
    using BackendError::BackendError;
};

class ContextLengthError : public BackendError {
public:
    using BackendError::BackendError;
};

class ScriptExhaustedError : public BackendError {
public:
    using BackendError::BackendError;
};

}  // namespace medal
