#pragma once

#include <stdexcept>
#include <string>

namespace strkit {

enum class ErrorCode {
  NotFound,
  DecodeError,
  DimensionMismatch,
  MaskTooSmall,
  ImageTooSmall,
  InvalidK,
  EmptyCorpus,
  RatioInvalid,
  EmptyDataset,
  RootMissing,
  NoPairsFound,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code);

/// Single exception type for all library failures; carries the ErrorCode
/// so callers (CLI, bindings) can map failures without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MaskTooSmall: return "MaskTooSmall";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::RatioInvalid: return "RatioInvalid";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::RootMissing: return "RootMissing";
    case ErrorCode::NoPairsFound: return "NoPairsFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace strkit
