#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace isop {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text (group spec, subset literal, number, config).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the range where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An element encoding does not belong to the group it was used with.
class TypeError : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract was violated (for example a non-geodesic word).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Ball enumeration would exceed the configured memory budget.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, int last_completed_radius)
      : Error(what), last_completed_radius_(last_completed_radius) {}

  int last_completed_radius() const noexcept { return last_completed_radius_; }

 private:
  int last_completed_radius_;
};

/// The growth table is too shallow to witness the requested value.
class InsufficientDepthError : public Error {
 public:
  using Error::Error;
};

/// The requested value does not exist because the group is finite and the
/// enumeration has saturated.
class FiniteGroupError : public Error {
 public:
  using Error::Error;
};

}  // namespace isop
