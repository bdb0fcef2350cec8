#pragma once
#include <stdexcept>

namespace spo {

// One exception type per error family named in the module contracts.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };       // operand shapes incompatible
struct IndexError : Error { using Error::Error; };       // class/row index out of range
struct UsageError : Error { using Error::Error; };       // API misuse (tape reuse, empty batch, ...)
struct NumericError : Error { using Error::Error; };     // non-finite value produced
struct ParseError : Error { using Error::Error; };       // malformed input, message names the line/row
struct FormatError : Error { using Error::Error; };      // well-formed file with incompatible dimensions
struct ConfigError : Error { using Error::Error; };      // bad or inconsistent configuration
struct IoError : Error { using Error::Error; };          // unreadable/unwritable file
struct DivergenceError : Error { using Error::Error; };  // training produced non-finite values
struct EvalError : Error { using Error::Error; };        // metric undefined on the given data
struct CompatError : Error { using Error::Error; };      // checkpoint/data mismatch

}  // namespace spo
