#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roby {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteInput,
  InvalidDistance,
  EmptyInput,
  EmptyClass,
  InvalidDataset,
  DuplicateIndex,
  LabelOutOfRange,
  // analysis
  LengthMismatch,
  TooFewPoints,
  ZeroVariance,
  UnknownColumn,
  // synth
  InvalidSpec,
  // io
  MalformedHeader,
  RaggedRow,
  MalformedValue,
  NonFiniteValue,
  MissingColumn,
  BadMagic,
  BadVersion,
  TruncatedFile,
  TrailingData,
  IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::InvalidDistance: return "InvalidDistance";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::InvalidDataset: return "InvalidDataset";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::MalformedValue: return "MalformedValue";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::TrailingData: return "TrailingData";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure the library reports. The code is stable and machine-checkable;
/// the message is for humans and names the file/line/stage where known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same code, message prefixed with where it happened.
  Error annotated(std::string_view where) const {
    return Error(code_, std::string(where) + ": " + detail_);
  }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace roby
