#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gqw {

/// Malformed or invalid user input (instance files, graph construction).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Syntax error in an instance document; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A square system had no unique solution.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t rank, std::size_t dimension)
      : std::runtime_error("singular matrix: rank " + std::to_string(rank) +
                           " of " + std::to_string(dimension)),
        rank_(rank) {}

  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

/// An operation was called outside the setting in which it is defined
/// (e.g. the signless-Laplacian route on a bipartite graph).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two independent computations of the same quantity disagreed. Always an
/// implementation bug, never a user error.
class OracleMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gqw
