#pragma once

#include <stdexcept>
#include <string>

namespace rnng {

// Malformed corpus, tree, or vocabulary input. CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bracketed-text syntax error with a 1-based source position.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, int line, int column)
      : DataError(what + " at line " + std::to_string(line) + ", column " +
                  std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Action sequence that violates the transition system.
class IllegalActionError : public DataError {
 public:
  IllegalActionError(const std::string& what, std::size_t index)
      : DataError(what + " (action index " + std::to_string(index) + ")"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Bad configuration keys or values. CLI exit code 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN/Inf trapped in a forward or backward pass. CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rnng
