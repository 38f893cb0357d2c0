#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bfd {

// Violated precondition on an argument (bad range, too-short input, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data is well-formed but unusable (non-finite values, empty file).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Shapelet discovery produced no candidate above the quality floor.
class NoShapeletsFound : public std::runtime_error {
 public:
  NoShapeletsFound() : std::runtime_error("no shapelets found") {}
  explicit NoShapeletsFound(const std::string& detail)
      : std::runtime_error("no shapelets found: " + detail) {}
};

}  // namespace bfd
