#pragma once

#include <stdexcept>
#include <string>

namespace noma {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Power split violates the NOMA constraint a1 >= a2.
class InfeasibleSplit : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Split puts the operating point at a segment endpoint, where event
/// classification is ill-posed.
class DegenerateSplit : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Adaptive refinement ran out of its subdivision budget.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem size beyond what double-precision series evaluation supports.
class UnsupportedSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noma
