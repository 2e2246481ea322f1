#pragma once

#include <stdexcept>
#include <string>

namespace limsup {

// Argument outside the evaluation domain of a function or operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A theorem, formula or construction does not apply to the given input.
class Inapplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an internal invariant check fails; maps to exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

}  // namespace limsup
