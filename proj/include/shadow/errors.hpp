#pragma once

#include <stdexcept>
#include <string>

namespace shadow {

/// Base of every error raised by the library. Carries an optional chain of
/// module names prepended by callers that orchestrate several modules.
class ShadowError : public std::exception {
public:
    explicit ShadowError(std::string message) : message_(std::move(message)) {}

    const char* what() const noexcept override { return message_.c_str(); }

    /// Prefix the message with "<module>: ". Used by the pipeline before
    /// rethrowing, so the dynamic type is preserved.
    void add_context(const std::string& module) { message_ = module + ": " + message_; }

private:
    std::string message_;
};

// Input-side errors: malformed or inconsistent source files.
class InputError : public ShadowError {
    using ShadowError::ShadowError;
};
class ParseError : public InputError {
    using InputError::InputError;
};
class DuplicateKeyError : public InputError {
    using InputError::InputError;
};
class UnknownIndicatorError : public InputError {
    using InputError::InputError;
};
class ValueError : public InputError {
    using InputError::InputError;
};

// Computation errors: the data loaded but an index cannot be evaluated.
class ComputationError : public ShadowError {
    using ShadowError::ShadowError;
};
class DivisionByZero : public ComputationError {
    using ComputationError::ComputationError;
};
class DomainError : public ComputationError {
    using ComputationError::ComputationError;
};
class MissingObservation : public ComputationError {
    using ComputationError::ComputationError;
};
/// The all-Russia row needed for national normalization is absent.
class MissingNationalBaseline : public MissingObservation {
    using MissingObservation::MissingObservation;
};
class NonPositiveValue : public ComputationError {
    using ComputationError::ComputationError;
};
class ArityError : public ComputationError {
    using ComputationError::ComputationError;
};
class MixedKeyError : public ComputationError {
    using ComputationError::ComputationError;
};
class EmptyGroup : public ComputationError {
    using ComputationError::ComputationError;
};
class MissingWeight : public ComputationError {
    using ComputationError::ComputationError;
};
class InsufficientData : public ComputationError {
    using ComputationError::ComputationError;
};
class ZeroVariance : public ComputationError {
    using ComputationError::ComputationError;
};
class DegenerateDistribution : public ComputationError {
    using ComputationError::ComputationError;
};
class MissingFeature : public ComputationError {
    using ComputationError::ComputationError;
};

class ConfigError : public ShadowError {
    using ShadowError::ShadowError;
};
class IoError : public ShadowError {
    using ShadowError::ShadowError;
};

}  // namespace shadow
