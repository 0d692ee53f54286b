#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvindex {

enum class ErrorKind {
  Structural,        // direct-sum shape mismatch or misuse of a leaf-only call
  TraceUndefined,    // operand has a nonzero Toeplitz symbol
  NotPositive,       // defect has an eigenvalue below the clipping threshold
  DivergentSeries,   // Neumann series requested with |zeta| >= 1
  NotAlmostUnitary,
  NotContraction,
  Numerical,         // a value that must be real came out complex, etc.
  Parse,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the byte offset into the spec string.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorKind::Parse, what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace curvindex
