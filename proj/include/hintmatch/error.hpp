#pragma once

#include <stdexcept>
#include <string>

namespace hintmatch {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: bad permutations, duplicate means, out-of-range
/// observations, unparsable files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric or structural parameter (infeasible gap, T = 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A policy produced an action the round protocol does not allow.
class ProtocolError : public Error {
 public:
  ProtocolError(long round, const std::string& what)
      : Error("round " + std::to_string(round) + ": " + what), round_(round) {}

  long round() const noexcept { return round_; }

 private:
  long round_;
};

}  // namespace hintmatch
