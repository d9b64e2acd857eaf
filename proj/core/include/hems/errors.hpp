#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hems {

/// Base class for every error raised by the library. `validation()` is true
/// for malformed inputs (configs, traces, parameters) and false for runtime
/// failures; the CLI maps the two classes to exit codes 1 and 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, bool validation = true)
      : std::runtime_error(what), validation_(validation) {}
  bool validation() const noexcept { return validation_; }

 private:
  bool validation_;
};

/// A config field is malformed (wrong sign, inverted bounds, ...).
class RangeError : public Error {
 public:
  RangeError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// One of the three controllability assumptions failed; `which` is 17, 18
/// or 19 and (lhs, rhs) are the two sides of the violated inequality.
class AssumptionViolated : public Error {
 public:
  AssumptionViolated(int which, double lhs, double rhs, const std::string& what)
      : Error(what), which_(which), lhs_(lhs), rhs_(rhs) {}
  int which() const noexcept { return which_; }
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  int which_;
  double lhs_, rhs_;
};

/// The closed-form controller parameters do not exist for this config
/// (empty shift ranges, nonpositive tradeoff cap, rejected override, ...).
class InfeasibleParameters : public Error {
 public:
  using Error::Error;
};

/// The per-slot solver could not reach its balance tolerance.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(what, false) {}
};

/// Malformed CSV input. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

/// A trace value falls outside the configured bounds.
class BoundsError : public Error {
 public:
  BoundsError(std::size_t slot, std::string field, const std::string& what)
      : Error(what), slot_(slot), field_(std::move(field)) {}
  std::size_t slot() const noexcept { return slot_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t slot_;
  std::string field_;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(std::string column)
      : Error("missing column: " + column), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class TraceLengthMismatch : public Error {
 public:
  using Error::Error;
};

class InfeasibleInitialState : public Error {
 public:
  using Error::Error;
};

class WindowTooShort : public Error {
 public:
  using Error::Error;
};

class EmptyRun : public Error {
 public:
  using Error::Error;
};

}  // namespace hems
