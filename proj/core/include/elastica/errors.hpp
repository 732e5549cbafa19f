#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elastica {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument (dimension mismatch, asymmetric input, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Explicit Euler step too large for the stiffest interaction mode.
class StabilityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A hypothesis of the rate theorem does not hold.
class PreconditionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Fit over a grid with too little spread in x.
class DegenerateGridError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Argument outside the domain of a closed-form function.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Base for failures that come from the data or floating point, not the inputs' shape.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularGramError : public NumericalError {
public:
    SingularGramError(const std::string& what, double condition)
        : NumericalError(what), condition_(condition) {}

    /// Ratio of extreme eigenvalues; +inf for the zero matrix.
    [[nodiscard]] double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class ZeroDenominatorError : public NumericalError {
public:
    explicit ZeroDenominatorError(std::size_t coord)
        : NumericalError("per-coordinate denominator is zero at coordinate " + std::to_string(coord)),
          coord_(coord) {}

    [[nodiscard]] std::size_t coord() const noexcept { return coord_; }

private:
    std::size_t coord_;
};

class EigenError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MissingNoiseError : public ValidationError {
public:
    MissingNoiseError()
        : ValidationError("trajectory bundle has no stored noise increments") {}
};

}  // namespace elastica
