#pragma once

#include <stdexcept>
#include <string>

namespace crowdrep {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad rows, unknown actors, bad horizons).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters supplied by the caller.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace crowdrep
