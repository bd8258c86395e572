#pragma once

#include <stdexcept>
#include <string>

namespace snowball {

/// Base class for every failure raised by the toolkit. Messages are meant to be
/// shown to the user verbatim (file, line, offending label, ...).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data.
class InputError : public Error {
public:
    using Error::Error;
};

/// A configuration that violates its documented invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace snowball
