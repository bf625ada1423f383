#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lgdda {

/// Base of all library errors: malformed input, violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concrete-syntax error with a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A configured search budget was exhausted. Never a verdict.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace lgdda
