#pragma once

#include <stdexcept>
#include <string>

namespace propint {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Valid arguments for which a method is undefined (e.g. n + kappa - 2 <= 0).
class UnsupportedRegime : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Method identifier that is unknown or not supported by the operation.
class UnsupportedMethod : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical guarantee was violated; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Malformed input data (missing columns, bad values, duplicates).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace propint
