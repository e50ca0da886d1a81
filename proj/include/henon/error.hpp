#pragma once

#include <stdexcept>
#include <string>

namespace henon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied arguments outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The map's fixed point structure does not support the request, e.g. the
/// origin is not a saddle.
class DynamicsPrecondition : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its contract (root bracketing lost,
/// iteration cap hit, parameter resolution exhausted).
class NumericFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace henon
