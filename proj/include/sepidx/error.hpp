#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sepidx {

enum class Errc {
  TooFewPoints,
  DimensionMismatch,
  NonFiniteValue,
  LengthMismatch,
  DuplicateCandidateName,
  LabelSequenceMismatch,
  EmptyCandidateList,
  SubsampleTooSmall,
  FixtureModeUnsupported,
  InsufficientOverlap,
  BadMagic,
  UnsupportedVersion,
  SizeMismatch,
  RaggedRows,
  NonNumericCell,
  MissingLabelColumn,
  SchemaViolation,
  Io,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Every recoverable failure in the library is reported as an Error carrying
/// one of the enumerated codes. `row`/`col` locate the offending cell for
/// NonFiniteValue and the CSV errors; `where` holds a path or JSON pointer.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Error(Errc code, const std::string& message, std::string where = {},
        std::size_t row = npos, std::size_t col = npos);

  Errc code() const noexcept { return code_; }
  // Message without the code prefix that what() carries.
  const std::string& detail() const noexcept { return detail_; }
  const std::string& where() const noexcept { return where_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  Errc code_;
  std::string detail_;
  std::string where_;
  std::size_t row_;
  std::size_t col_;
};

}  // namespace sepidx
