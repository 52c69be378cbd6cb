#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oiglab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an enumeration would exceed one of the configured budgets.
/// The message names the limit so callers can report which knob to turn.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string limit, std::size_t allowed, std::size_t requested);

  const std::string& limit() const noexcept { return limit_; }
  std::size_t allowed() const noexcept { return allowed_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::string limit_;
  std::size_t allowed_;
  std::size_t requested_;
};

/// Observed labels that no hypothesis of the assumed class can produce.
class RealizabilityViolation : public Error {
 public:
  using Error::Error;
};

/// Problem or FDS document that does not parse or validate.
/// Line and column are 1-based; both are 0 for schema errors, which name
/// the offending field in the message instead.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace oiglab
