#pragma once

#include <stdexcept>
#include <string>

namespace prohecke {

enum class ErrorKind {
  CompositeCharacteristic,
  ReducibleModulus,
  ZeroInverse,
  CtxMismatch,
  InvalidArgument,
  KindMismatch,
  WrongRegularity,
  UnsupportedCharacteristic,
  VerificationFailure,
  TruncationTooSmall,
  RelationViolation,
  ZeroLambda,
  ComparisonFailure,
  EvenCharacteristic,
  UnsupportedKind,
  FinitePDModule,
  WindowTooSmall,
  WindowMismatch,
  OutsideCatalogue,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace prohecke
