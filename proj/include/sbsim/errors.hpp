// errors.hpp: Exception hierarchy shared by every sbsim module

#pragma once

#include <stdexcept>
#include <string>

namespace sbsim {

enum class ErrorKind {
    NonPositiveFrequency,
    NegativeCoupling,
    InvalidNumerics,
    InvalidConfig,
    NoConvergence,
    BoundaryNotBracketed,
    TruncationNotConverged,
    TruncationTooLarge,
    NegativeFrequencyRequest,
    DissipationlessLimit,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string field, const std::string& message)
        : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

    ErrorKind kind() const noexcept { return kind_; }
    // Offending input field or failing module, depending on the error class.
    const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::string field_;
};

// Bad user input: parameters, numerics, config documents.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed to reach its stated tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace sbsim
