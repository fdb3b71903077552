#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvlsw {

/// Invalid argument to a library call (bad order, J too large for T, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The inner-product operator is too ill-conditioned to invert.
class SingularOperatorError : public std::runtime_error {
 public:
  SingularOperatorError(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// A process specification violates its invariants at rescaled time u.
class SpecificationError : public std::runtime_error {
 public:
  SpecificationError(const std::string& what, double u)
      : std::runtime_error(what), u_(u) {}
  double rescaled_time() const noexcept { return u_; }

 private:
  double u_;
};

/// Malformed input file. line() is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Inputs that are individually valid but inconsistent with each other.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Value outside the mathematical domain of a transform (e.g. log of a
/// non-positive price).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mvlsw
