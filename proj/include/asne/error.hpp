#ifndef ASNE_ERROR_HPP
#define ASNE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace asne {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid experiment/colony/scheme configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Malformed or unusable input data (CSV parsing, bad columns, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

// Filesystem-level failure (unwritable directory, missing file, ...).
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

// Internal invariant violation; indicates a bug, not a user error.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

} // namespace asne

#endif
