// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pfg {

/// Coarse failure categories, used by the CLI to pick exit codes.
enum class ErrorCategory {
  usage,     ///< bad parameters, malformed input files
  analysis,  ///< the data could not be analyzed (no peak, window too short)
  capacity,  ///< request exceeds an implementation bound
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string message)
      : std::runtime_error(std::move(message)), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// A synthesis window shorter than two oscillation cycles.
struct InvalidDuration : Error {
  explicit InvalidDuration(std::string msg) : Error(ErrorCategory::usage, std::move(msg)) {}
};

/// Fewer samples than the spectral estimator needs.
struct TooShort : Error {
  explicit TooShort(std::string msg) : Error(ErrorCategory::analysis, std::move(msg)) {}
};

/// No in-band spectral peak cleared the SNR gate.
struct NoOscillationDetected : Error {
  explicit NoOscillationDetected(std::string msg, std::string window = "")
      : Error(ErrorCategory::analysis, std::move(msg)), window_(std::move(window)) {}
  /// "pre", "post", or empty when the failure is not tied to a trace window.
  const std::string& window() const noexcept { return window_; }

 private:
  std::string window_;
};

struct NonPositiveStd : Error {
  explicit NonPositiveStd(std::string msg) : Error(ErrorCategory::usage, std::move(msg)) {}
};

struct UnknownBuiltin : Error {
  explicit UnknownBuiltin(std::string msg) : Error(ErrorCategory::usage, std::move(msg)) {}
};

struct TooManyGates : Error {
  explicit TooManyGates(std::string msg) : Error(ErrorCategory::capacity, std::move(msg)) {}
};

/// Malformed input file (trace CSV, response-model JSON).
struct ParseError : Error {
  explicit ParseError(std::string msg) : Error(ErrorCategory::usage, std::move(msg)) {}
};

/// Netlist DSL errors carry the 1-based source location of the offending token.
class NetlistError : public Error {
 public:
  NetlistError(std::string msg, std::size_t line, std::size_t col)
      : Error(ErrorCategory::usage,
              msg + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

struct SyntaxError : NetlistError {
  using NetlistError::NetlistError;
};
struct UnknownGateKind : NetlistError {
  using NetlistError::NetlistError;
};
struct UndefinedWire : NetlistError {
  using NetlistError::NetlistError;
};
struct DuplicateId : NetlistError {
  using NetlistError::NetlistError;
};
struct CycleDetected : NetlistError {
  using NetlistError::NetlistError;
};

}  // namespace pfg
