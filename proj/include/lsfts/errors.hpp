#pragma once

#include <stdexcept>
#include <string>

namespace lsfts {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on arguments was violated (bad grid, bad order, bad
/// bandwidth, mismatched grids, horizon out of range, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Every kernel weight vanished: the rescaled time u is too far from the
/// observed range for the given bandwidth.
class EmptyWindowError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown: non-finite inputs, or an operator that should be
/// positive semidefinite has a strongly negative eigenvalue.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed input files (ragged CSV rows, non-numeric cells, bad grids).
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace lsfts
