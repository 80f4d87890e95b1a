#pragma once

#include <stdexcept>
#include <string>

namespace awb {

/// Caller violated an operation's precondition (bad ordinal, odd-sized set, ...).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A window, budget or enumeration cap was exceeded. Never replaced by sampling.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text or JSON input.
class ParseError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A search ran to completion without finding what it was asked for.
class SearchFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace awb
