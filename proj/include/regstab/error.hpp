#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regstab {

/// Every failure the library reports. The grouping below mirrors the exit
/// status a command reports for it (see `category`).
enum class ErrorKind {
  // validation
  ZeroVariance,
  NonFinite,
  DimensionMismatch,
  LengthMismatch,
  NotSymmetric,
  AllZero,
  NegativeEigenvalue,
  ThresholdUnreachable,
  EmptyDataset,
  LabelOutOfRange,
  NonPositiveOutput,
  DegenerateRange,
  OutOfRange,
  TooFewPoints,
  DegenerateYears,
  MissingColumn,
  ParseError,
  RangeViolation,
  DuplicateKey,
  TooFewRecords,
  InvalidConfig,
  InsufficientHistory,
  // numeric
  NoConvergence,
  // i/o
  ModelMissing,
  Io,
};

enum class ErrorCategory { Validation = 1, Numeric = 2, Io = 3 };

constexpr ErrorCategory category(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoConvergence:
      return ErrorCategory::Numeric;
    case ErrorKind::ModelMissing:
    case ErrorKind::Io:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Validation;
  }
}

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return regstab::category(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace regstab
