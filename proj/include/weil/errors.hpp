#pragma once

#include <stdexcept>
#include <string>

namespace weil {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inverting an element whose scalar part is (numerically) zero.
class NonInvertibleError : public Error {
public:
  using Error::Error;
};

/// A primitive function was evaluated outside its domain (log of a
/// non-positive value, division by zero, and so on).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed descriptor, config file, or expression source text.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A metric whose Gram matrix is singular at a probe point.
class SingularMetricError : public Error {
public:
  using Error::Error;
};

/// The point sampler could not find an in-domain point within its
/// retry budget.
class DomainExhaustedError : public Error {
public:
  using Error::Error;
};

} // namespace weil
