#pragma once

#include <stdexcept>
#include <string>

namespace fubini {

// Invalid user-supplied parameters (bad intervals, unknown options, mismatched grids).
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the range an operation supports.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A declared property of the input (envelope, ordering) did not hold.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The computation ran but cannot produce a trustworthy answer.
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SelectionError : public DiagnosticError {
 public:
  using DiagnosticError::DiagnosticError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fubini
