#pragma once

#include <stdexcept>
#include <string>

namespace rankbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file, row or field.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but violates a structural requirement (completeness,
/// duplicates, missing reference data, unknown solver...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Bad arguments passed to an operation (e.g. alpha outside (0,1)).
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace rankbench
