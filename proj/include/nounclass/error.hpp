#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nounclass {

/// Broad failure category; the CLI maps each to its own exit status.
enum class ErrorKind { Usage, Io, Parse, Data };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error(ErrorKind::Parse,
              line ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nounclass
