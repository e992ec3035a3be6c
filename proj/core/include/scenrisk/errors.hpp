#pragma once

#include <stdexcept>
#include <string>

namespace scenrisk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural or precondition violation in user-supplied data.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A quantity that does not exist for the given inputs (empty conditioning
/// event, infeasible conjugate program, ...).
class UndefinedError : public Error {
public:
    using Error::Error;
};

} // namespace scenrisk
