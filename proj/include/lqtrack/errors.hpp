#pragma once

#include <stdexcept>
#include <string>

namespace lqtrack {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands have incompatible or otherwise unusable shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An operation that requires a symmetric input received an asymmetric one.
class SymmetryError : public Error {
public:
    using Error::Error;
};

/// A linear system could not be solved because its matrix is singular.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// The Lyapunov operator is singular: some eigenvalue pair of the
/// coefficient matrix sums to zero, so the equation has no unique solution.
class ResonantSpectrumError : public Error {
public:
    using Error::Error;
};

/// An iterative solver exhausted its iteration budget or produced a result
/// that fails its accuracy requirement.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// No stabilizing initial gain could be constructed for the given pair.
class StabilizationError : public Error {
public:
    using Error::Error;
};

/// The communication topology fails a structural requirement.
class NetworkError : public Error {
public:
    using Error::Error;
};

/// A design parameter lies outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// The closed loop is unstable, so the requested quantity does not exist.
class UnstableClosedLoopError : public Error {
public:
    using Error::Error;
};

/// A simulated trajectory left the representable range.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A configuration or certificate document is malformed.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace lqtrack
