#pragma once

#include <stdexcept>
#include <string>

namespace cooploss {

/// Violated precondition or invariant of a domain value (bad dimensions,
/// non-normalized state, degenerate coupling, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A 2L-qubit state handed to the decoder is not an encoded codeword.
class NotACodewordError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed textual input (JSON config, circuit file).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cooploss
