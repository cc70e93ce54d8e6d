#pragma once

#include <stdexcept>
#include <string>

namespace dforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the domain of a function or interval.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Value outside the range of an invertible function.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to reach the requested tolerance.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Invalid construction parameter.
class ParamError : public Error {
public:
    using Error::Error;
};

/// Candidate object is not structurally representable in the supported catalogue.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A numeric limit/divergence test neither converged nor certified divergence.
class InconclusiveNumeric : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to meet its tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// A density failed a local integrability requirement.
class IntegrabilityError : public Error {
public:
    using Error::Error;
};

/// A constructed object violated one of its proof-level inequalities.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Fixture name not present in the catalogue.
class UnknownFixture : public Error {
public:
    using Error::Error;
};

/// Serialization / config parsing problem, with field context where available.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace dforge
