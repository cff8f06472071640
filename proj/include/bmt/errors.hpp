#pragma once

#include <stdexcept>
#include <string>

namespace bmt {

/// Malformed or inconsistent input: bad partitions, unknown vertices,
/// violated preconditions. The CLI maps this to exit code 1.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that is well-formed but exceeds an enumeration or
/// dimension cap. The CLI maps this to exit code 2.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bmt
