#pragma once

#include <stdexcept>
#include <string>

namespace dualmax {

/// Base class for all dualmax errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed problem instance: bad dimensions, non-PSD cost weight, out-of-range scalars.
class InvalidInstanceError : public Error {
public:
    using Error::Error;
};

/// The admissible input-vector set is empty (or the requested point lies outside it).
class InfeasibleSetError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (eigensolver non-convergence, optimizer breakdown).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Bad experiment configuration or command-line usage.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace dualmax
