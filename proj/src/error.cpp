#include "sepidx/error.hpp"

namespace sepidx {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DuplicateCandidateName: return "DuplicateCandidateName";
    case Errc::LabelSequenceMismatch: return "LabelSequenceMismatch";
    case Errc::EmptyCandidateList: return "EmptyCandidateList";
    case Errc::SubsampleTooSmall: return "SubsampleTooSmall";
    case Errc::FixtureModeUnsupported: return "FixtureModeUnsupported";
    case Errc::InsufficientOverlap: return "InsufficientOverlap";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::NonNumericCell: return "NonNumericCell";
    case Errc::MissingLabelColumn: return "MissingLabelColumn";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::Io: return "Io";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, std::string where,
             std::size_t row, std::size_t col)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message),
      where_(std::move(where)),
      row_(row),
      col_(col) {}

}  // namespace sepidx
