#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sepidx/feature_set.hpp"

namespace sepidx {

// SIDX container, little-endian:
//   offset 0   "SIDX"
//   offset 4   version  u8  (1)
//   offset 5   dtype    u8  (0 = f32, 1 = f64)
//   offset 6   reserved 2 bytes, zero
//   offset 8   q        u64
//   offset 16  d        u64
//   offset 24  q labels u32
//   then       q*d values, row-major
inline constexpr std::size_t kSidxHeaderSize = 24;
inline constexpr std::uint8_t kSidxVersion = 1;

enum class SidxDtype : std::uint8_t { F32 = 0, F64 = 1 };

std::size_t sidx_file_size(std::uint64_t q, std::uint64_t d, SidxDtype dtype);

/// Decodes and validates a SIDX image. f64 data is rounded to nearest-even
/// into float storage and the set is flagged `narrowed_from_f64`.
/// Throws BadMagic, UnsupportedVersion, SizeMismatch, or the validation errors.
LabeledFeatureSet parse_sidx(std::span<const std::byte> bytes, std::string name = {});
LabeledFeatureSet read_sidx(const std::filesystem::path& path);

template <typename Scalar>
std::vector<std::byte> encode_sidx(const BasicFeatureSet<Scalar>& fs);

/// float sets are written as dtype 0, double sets as dtype 1.
template <typename Scalar>
void write_sidx(const BasicFeatureSet<Scalar>& fs, const std::filesystem::path& path);

/// Comma-separated, header row required, '.' decimal point, no quoting.
/// Features are every non-label column in header order.
/// Throws RaggedRows, NonNumericCell, MissingLabelColumn (row/col are 1-based
/// line and column numbers of the file).
LabeledFeatureSet parse_csv(std::string_view text, std::string_view label_column,
                            std::string name = {});
LabeledFeatureSet read_csv(const std::filesystem::path& path, std::string_view label_column);

std::string format_csv(const LabeledFeatureSet& fs, std::string_view label_column = "label");
void write_csv(const LabeledFeatureSet& fs, const std::filesystem::path& path,
               std::string_view label_column = "label");

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

extern template std::vector<std::byte> encode_sidx(const BasicFeatureSet<float>&);
extern template std::vector<std::byte> encode_sidx(const BasicFeatureSet<double>&);
extern template void write_sidx(const BasicFeatureSet<float>&, const std::filesystem::path&);
extern template void write_sidx(const BasicFeatureSet<double>&, const std::filesystem::path&);

}  // namespace sepidx
