#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace sglasso {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;

    /// Short machine-readable tag, used in JSON error records.
    virtual const char* kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

class DimensionMismatch : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "dimension_mismatch"; }
};

/// A Cholesky pivot fell below the positive-definiteness floor.
class NotPositiveDefinite : public Error
{
public:
    NotPositiveDefinite(std::size_t pivot, double value)
        : Error("matrix is not positive definite (pivot " + std::to_string(pivot)
                + ", value " + std::to_string(value) + ")"),
          pivot_(pivot),
          value_(value)
    {}

    std::size_t pivot() const noexcept { return pivot_; }
    double pivot_value() const noexcept { return value_; }
    const char* kind() const noexcept override { return "not_positive_definite"; }

private:
    std::size_t pivot_;
    double value_;
};

class NonFinite : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "non_finite"; }
};

class IoError : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io_error"; }
};

} // namespace sglasso
