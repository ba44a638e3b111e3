#pragma once

#include <stdexcept>
#include <string>

namespace opasim {

// Bad input: out-of-range parameter, malformed config, unknown scenario.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but physically outside the model: pump at or above
// threshold, unreachable calibration target.
class PhysicsDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opasim
