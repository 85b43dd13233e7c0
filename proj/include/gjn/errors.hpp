#pragma once

#include <stdexcept>
#include <string>

namespace gjn {

/// Malformed or out-of-contract input (dimensions, ranges, schema).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a cumulant is requested at or beyond the MGF domain supremum.
class OutsideMgfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an operation's precondition on the network fails
/// (e.g. the traffic equations are singular).
class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gjn
