#pragma once

#include <stdexcept>
#include <string>

namespace otslab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unknown registry / digest / paramset identifier.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Argument outside its documented domain (t, p, w, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the given parameters (e.g. even multiplier).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Malformed file or value being parsed; message names line/field.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Stored public material disagrees with recomputation from private material.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// One-time key already consumed; signing refused.
class ReuseError : public Error {
public:
    using Error::Error;
};

/// Invalid benchmark combination (scheme x paramset x mode).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (unwritable path, rename failure, ...).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace otslab
