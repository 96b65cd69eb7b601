#pragma once

#include <stdexcept>
#include <string>

namespace primeset {

enum class ErrorKind {
  parse,
  unknown_symbol,
  unknown_factor,
  resource_limit,
  precision_escalation,
  invalid_argument,
  version_mismatch,
  mixed_epsilon,
  unknown_code,
  invariant_violation,
  io,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::unknown_symbol: return "unknown-symbol";
    case ErrorKind::unknown_factor: return "unknown-factor";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::precision_escalation: return "precision-escalation";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::version_mismatch: return "version-mismatch";
    case ErrorKind::mixed_epsilon: return "mixed-epsilon";
    case ErrorKind::unknown_code: return "unknown-code";
    case ErrorKind::invariant_violation: return "invariant-violation";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying the 1-based line number (0 when not line oriented).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::parse,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace primeset
