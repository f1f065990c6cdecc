#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hvm {

enum class ErrorKind {
  NonBinaryValue,
  NonFiniteValue,
  DuplicateName,
  TooFewRows,
  MalformedInput,
  SpecMismatch,
  ShapeMismatch,
  BinaryAmplitudeViolation,
  InvalidDelta,
  EmptyInput,
  EmptySegment,
  DomainError,
  InvalidConfig,
  TooShort,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable category.
class HvmError : public std::runtime_error {
 public:
  HvmError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hvm
