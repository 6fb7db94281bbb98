#pragma once

#include <stdexcept>
#include <string>

namespace sosw {

enum class ErrorKind {
  Parse,
  Arity,
  UnknownAction,
  DuplicateMarking,
  UniverseEscape,
  IncompleteTSS,
  BoundExceeded,
  Unbounded,
  PartialRuloids,
  CapExceeded,
  SubsetBlowup,
  InfiniteDecomposition,
  Unsupported,
  Precondition,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(ErrorKind::Parse,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace sosw
