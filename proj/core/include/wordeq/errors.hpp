#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wordeq {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Word-grammar syntax error; carries the offending character offset.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Numerical failure: eigensolver non-convergence, singular coefficient, ...
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace wordeq
