#pragma once

#include <stdexcept>
#include <string>

namespace service_rag {

/// Failure category. The CLI maps each one onto exactly one exit code.
enum class ErrorKind {
    usage,     // bad flags or configuration
    input,     // malformed or inconsistent data
    provider,  // embedding/chat backend failure
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class ConfigError : public UsageError {
public:
    using UsageError::UsageError;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class DuplicateIdError : public InputError {
public:
    explicit DuplicateIdError(const std::string& id)
        : InputError("duplicate incident id '" + id + "'"), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class DimensionMismatchError : public InputError {
public:
    using InputError::InputError;
};

class ZeroNormError : public InputError {
public:
    using InputError::InputError;
};

class ModelMismatchError : public InputError {
public:
    using InputError::InputError;
};

class CorruptIndexError : public InputError {
public:
    using InputError::InputError;
};

class IndexVersionError : public InputError {
public:
    using InputError::InputError;
};

class ProviderError : public Error {
public:
    explicit ProviderError(const std::string& what) : Error(ErrorKind::provider, what) {}
};

}  // namespace service_rag
