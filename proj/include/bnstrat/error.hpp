#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnstrat {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network or evidence text. `line()` is 1-based, 0 when the
/// problem is not tied to a single line (e.g. a cycle).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The evidence has probability zero under the network.
class ZeroProbabilityEvidence : public Error {
 public:
  using Error::Error;
};

/// A Markov-blanket conditional came out all zero.
class DegenerateBlanket : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration was requested on a network above the size guard.
class EnumerationGuard : public Error {
 public:
  using Error::Error;
};

/// Every sample of a run carried zero weight.
class ZeroScores : public Error {
 public:
  using Error::Error;
};

}  // namespace bnstrat
