#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace almostdom {

enum class ErrorKind {
  EmptySample,
  ZeroMean,
  DegenerateCurves,
  InvalidFamilyDegree,
  SchemeMismatch,
  FamilyMismatch,
  GridMismatch,
  NonFiniteDraw,
  InvalidConfig,
  DomainError,
  FileNotFound,
  ParseError,
  NegativeValue,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. `kind()` lets
/// callers (the CLI in particular) map failures to exit codes without
/// string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed CSV cell. Rows and columns are 1-based file coordinates
/// (the header, when present, is row 1).
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : Error(ErrorKind::ParseError,
              "row " + std::to_string(row) + ", col " + std::to_string(col) + ": " + what),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class NegativeValueError : public Error {
 public:
  NegativeValueError(std::size_t row, double value)
      : Error(ErrorKind::NegativeValue,
              "row " + std::to_string(row) + ": negative value " + std::to_string(value)),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace almostdom
