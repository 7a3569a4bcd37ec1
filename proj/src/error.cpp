#include "regstab/error.hpp"

namespace regstab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::ThresholdUnreachable: return "ThresholdUnreachable";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::NonPositiveOutput: return "NonPositiveOutput";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DegenerateYears: return "DegenerateYears";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::TooFewRecords: return "TooFewRecords";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ModelMissing: return "ModelMissing";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace regstab
