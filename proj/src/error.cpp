#include "prohecke/error.hpp"

namespace prohecke {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CompositeCharacteristic: return "CompositeCharacteristic";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::ZeroInverse: return "ZeroInverse";
    case ErrorKind::CtxMismatch: return "CtxMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::WrongRegularity: return "WrongRegularity";
    case ErrorKind::UnsupportedCharacteristic: return "UnsupportedCharacteristic";
    case ErrorKind::VerificationFailure: return "VerificationFailure";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::RelationViolation: return "RelationViolation";
    case ErrorKind::ZeroLambda: return "ZeroLambda";
    case ErrorKind::ComparisonFailure: return "ComparisonFailure";
    case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorKind::UnsupportedKind: return "UnsupportedKind";
    case ErrorKind::FinitePDModule: return "FinitePDModule";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::WindowMismatch: return "WindowMismatch";
    case ErrorKind::OutsideCatalogue: return "OutsideCatalogue";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace prohecke
