#pragma once

#include <stdexcept>
#include <string>

namespace topsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// A caller-supplied value violates a precondition.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A file exists but its contents are malformed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Vector or matrix shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Every query in an evaluation subset had to be skipped.
class NoEvaluableQueriesError : public Error {
public:
    using Error::Error;
};

/// A numerical failure (overflow, non-finite intermediate).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace topsim
