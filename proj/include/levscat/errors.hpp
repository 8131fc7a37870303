#pragma once

#include <stdexcept>
#include <string>

namespace levscat {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed configuration document (syntax or schema).
class parse_error : public error {
public:
  using error::error;
};

/// Structurally valid input that violates a domain invariant.
class validation_error : public error {
public:
  using error::error;
};

/// An iterative numerical procedure failed to reach its tolerance.
/// Carries the error estimate that was actually achieved.
class numerical_error : public error {
public:
  numerical_error(const std::string& msg, double achieved)
      : error(msg), achieved_error(achieved) {}
  double achieved_error;
};

/// Discretization too coarse for the requested problem.
class resolution_error : public error {
public:
  resolution_error(const std::string& msg, long suggested = 0)
      : error(msg), suggested_steps(suggested) {}
  long suggested_steps;
};

/// Special-function evaluation left the representable range.
class range_error : public error {
public:
  using error::error;
};

/// Degenerate matching system (numerator and denominator both vanish).
class matching_error : public error {
public:
  using error::error;
};

/// Two internally consistent computations disagree; both diagnostics quoted.
class inconsistency_error : public error {
public:
  using error::error;
};

/// Operation invoked outside its stated precondition.
class usage_error : public error {
public:
  using error::error;
};

} // namespace levscat
