#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcpoly {

class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
        : std::invalid_argument(what + ": expected dimension " + std::to_string(expected) +
                                ", got " + std::to_string(got)) {}
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          position_(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Raised when a numerical procedure cannot meet its contract
/// (quadrature budget, zero-mass bracket, singular covariance).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate inputs to a checker, e.g. vanishing variance of g.
class DegenerateInput : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// File could not be opened, written or read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lcpoly
