#pragma once

#include <stdexcept>
#include <string>

namespace fdw {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files or invariant violations in loaded data.
class DataError : public Error {
public:
    using Error::Error;
};

/// A pipeline needs an annotation layer the corpus does not provide.
class CapabilityError : public DataError {
public:
    using DataError::DataError;
};

/// An argument outside an operation's contract (bad band, unknown name, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Training diverged or otherwise could not complete.
class TrainingError : public Error {
public:
    using Error::Error;
};

}  // namespace fdw
