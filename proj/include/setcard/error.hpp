#pragma once

#include <stdexcept>
#include <string>

namespace setcard {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ill-sorted term or constraint.
class SortError : public Error {
 public:
  using Error::Error;
};

// Product of two non-constant integer terms.
class NonLinearError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownMacro : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  TimeoutError() : Error("timeout") {}
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace setcard
