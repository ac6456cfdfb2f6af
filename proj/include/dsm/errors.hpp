#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two grid functions (or a function and an operator) live on different grids.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An argument is outside its documented range (a <= 0, delta <= 0, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A value that must be finite is NaN or infinite.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// An iterative solve failed to converge or diverged.
class SolveError : public Error {
public:
    using Error::Error;
};

/// A root bracket does not straddle the target value.
class BracketError : public Error {
public:
    using Error::Error;
};

/// The data residual never reaches the requested discrepancy level.
class NoCrossingError : public Error {
public:
    using Error::Error;
};

} // namespace dsm
