#pragma once

#include <stdexcept>
#include <string>

namespace afc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed term: arity mismatch, marks on a composite head, ...
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Undeclared variable or cyclic alias map.
class ContextError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a configured bound.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed (∂∘∂ ≠ 0, non-decreasing rewrite measure, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace afc
