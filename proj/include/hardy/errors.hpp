#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

/// Point or object lies outside the admissible set of a domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid scalar parameter (exponent, count, ratio, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation not defined for this domain variant.
class UnsupportedVariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A field whose weighted norm vanishes, or a constraint set leaving no free node.
class DegenerateFieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values produced during a solve.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hardy
