#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simpleds {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated pre-condition on a public operation (wrong sizes, out-of-range
// indices, values outside their documented domain).
class ContractError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ContractError {
 public:
  DimensionError(const std::string& what, std::size_t expected, std::size_t actual)
      : ContractError(what + ": expected size " + std::to_string(expected) +
                      ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

// Malformed binary or text stream; offset is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Bad data pack or configuration file; line is 1-based, 0 when unknown.
class DataError : public Error {
 public:
  DataError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class TrainingFault : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace simpleds
