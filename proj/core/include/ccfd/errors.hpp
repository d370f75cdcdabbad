#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccfd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad spec fields, mismatched sizes, unknown ids.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The moment system of a stencil has no unique solution.
class DegenerateStencilError : public Error {
public:
    DegenerateStencilError(const std::string& what, double condition_estimate)
        : Error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// Zero (or vanishing) pivot met while eliminating a tridiagonal system.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& what, std::size_t row)
        : Error(what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A NaN or Inf appeared in an iterate.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace ccfd
