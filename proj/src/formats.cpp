#include "sepidx/formats.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace sepidx {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'D', 'X'};

std::size_t width(SidxDtype dtype) { return dtype == SidxDtype::F32 ? 4 : 8; }

std::uint64_t load_le(const std::byte* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void store_le(std::vector<std::byte>& out, std::uint64_t v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

// q, d and the total must all fit in size_t without wrapping.
bool checked_size(std::uint64_t q, std::uint64_t d, SidxDtype dtype, std::size_t& total) {
  constexpr auto max = std::numeric_limits<std::size_t>::max();
  if (q > (max - kSidxHeaderSize) / 4) return false;
  std::size_t cells = 0;
  if (d != 0 && q > max / d) return false;
  cells = static_cast<std::size_t>(q * d);
  if (cells > max / width(dtype)) return false;
  const std::size_t data = cells * width(dtype);
  const std::size_t head = kSidxHeaderSize + static_cast<std::size_t>(q) * 4;
  if (data > max - head) return false;
  total = head + data;
  return true;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

}  // namespace

std::size_t sidx_file_size(std::uint64_t q, std::uint64_t d, SidxDtype dtype) {
  std::size_t total = 0;
  if (!checked_size(q, d, dtype, total)) {
    throw Error(Errc::SizeMismatch, "declared shape overflows the addressable size");
  }
  return total;
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw Error(Errc::Io, "no such file: " + path.string(), path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string(), path.string());
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw Error(Errc::Io, "cannot determine size of " + path.string(), path.string());
  in.seekg(0, std::ios::beg);
  std::vector<std::byte> bytes(static_cast<std::size_t>(size));
  if (!bytes.empty() && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw Error(Errc::Io, "read failed: " + path.string(), path.string());
  }
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open for writing: " + path.string(), path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed: " + path.string(), path.string());
}

LabeledFeatureSet parse_sidx(std::span<const std::byte> bytes, std::string name) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(Errc::BadMagic, "missing \"SIDX\" magic", name);
  }
  if (bytes.size() < kSidxHeaderSize) {
    throw Error(Errc::SizeMismatch, "header needs " + std::to_string(kSidxHeaderSize) +
                                        " bytes, file has " + std::to_string(bytes.size()),
                name);
  }
  const auto version = static_cast<std::uint8_t>(bytes[4]);
  if (version != kSidxVersion) {
    throw Error(Errc::UnsupportedVersion, "version " + std::to_string(version), name);
  }
  const auto raw_dtype = static_cast<std::uint8_t>(bytes[5]);
  if (raw_dtype > 1) {
    throw Error(Errc::UnsupportedVersion, "unknown dtype " + std::to_string(raw_dtype), name);
  }
  if (bytes[6] != std::byte{0} || bytes[7] != std::byte{0}) {
    throw Error(Errc::UnsupportedVersion, "reserved header bytes are not zero", name);
  }
  const auto dtype = static_cast<SidxDtype>(raw_dtype);
  const std::uint64_t q = load_le(bytes.data() + 8, 8);
  const std::uint64_t d = load_le(bytes.data() + 16, 8);
  std::size_t expected = 0;
  if (!checked_size(q, d, dtype, expected) || expected != bytes.size()) {
    throw Error(Errc::SizeMismatch,
                "q=" + std::to_string(q) + ", d=" + std::to_string(d) + " needs " +
                    (expected ? std::to_string(expected) : std::string("an unrepresentable number of")) +
                    " bytes, file has " + std::to_string(bytes.size()),
                name);
  }

  LabeledFeatureSet fs;
  fs.name = std::move(name);
  fs.narrowed_from_f64 = dtype == SidxDtype::F64;
  fs.labels.resize(q);
  const std::byte* p = bytes.data() + kSidxHeaderSize;
  for (std::size_t i = 0; i < q; ++i, p += 4) fs.labels[i] = static_cast<Label>(load_le(p, 4));
  fs.points.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(d));
  float* out = fs.points.data();
  const std::size_t cells = static_cast<std::size_t>(q * d);
  if (dtype == SidxDtype::F32) {
    for (std::size_t i = 0; i < cells; ++i, p += 4) {
      out[i] = std::bit_cast<float>(static_cast<std::uint32_t>(load_le(p, 4)));
    }
  } else {
    for (std::size_t i = 0; i < cells; ++i, p += 8) {
      // Default floating-point environment: round to nearest, ties to even.
      out[i] = static_cast<float>(std::bit_cast<double>(load_le(p, 8)));
    }
  }
  validate(fs);
  return fs;
}

LabeledFeatureSet read_sidx(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return parse_sidx(bytes, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), e.detail() + " (" + path.string() + ")", path.string(), e.row(),
                e.col());
  }
}

template <typename Scalar>
std::vector<std::byte> encode_sidx(const BasicFeatureSet<Scalar>& fs) {
  validate(fs);
  constexpr SidxDtype dtype = sizeof(Scalar) == 4 ? SidxDtype::F32 : SidxDtype::F64;
  const std::uint64_t q = fs.size();
  const std::uint64_t d = fs.dim();
  std::vector<std::byte> out;
  out.reserve(sidx_file_size(q, d, dtype));
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  out.push_back(static_cast<std::byte>(kSidxVersion));
  out.push_back(static_cast<std::byte>(dtype));
  out.push_back(std::byte{0});
  out.push_back(std::byte{0});
  store_le(out, q, 8);
  store_le(out, d, 8);
  for (Label l : fs.labels) store_le(out, l, 4);
  const Scalar* data = fs.points.data();
  for (std::size_t i = 0; i < q * d; ++i) {
    if constexpr (dtype == SidxDtype::F32) {
      store_le(out, std::bit_cast<std::uint32_t>(data[i]), 4);
    } else {
      store_le(out, std::bit_cast<std::uint64_t>(data[i]), 8);
    }
  }
  return out;
}

template <typename Scalar>
void write_sidx(const BasicFeatureSet<Scalar>& fs, const std::filesystem::path& path) {
  write_file_bytes(path, encode_sidx(fs));
}

template std::vector<std::byte> encode_sidx(const BasicFeatureSet<float>&);
template std::vector<std::byte> encode_sidx(const BasicFeatureSet<double>&);
template void write_sidx(const BasicFeatureSet<float>&, const std::filesystem::path&);
template void write_sidx(const BasicFeatureSet<double>&, const std::filesystem::path&);

LabeledFeatureSet parse_csv(std::string_view text, std::string_view label_column, std::string name) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(Errc::MissingLabelColumn, "CSV has no header row", name);

  const auto header = split_cells(lines[0]);
  std::size_t label_index = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column) {
      label_index = c;
      break;
    }
  }
  if (label_index == header.size()) {
    throw Error(Errc::MissingLabelColumn, "no column named '" + std::string(label_column) + "'", name);
  }

  const std::size_t cols = header.size();
  const std::size_t rows = lines.size() - 1;
  std::vector<float> values;
  values.reserve(rows * (cols - 1));
  std::vector<Label> labels;
  labels.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t line_no = r + 2;
    const auto cells = split_cells(lines[r + 1]);
    if (cells.size() != cols) {
      throw Error(Errc::RaggedRows,
                  "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(cols),
                  name, line_no);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const auto cell = cells[c];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      const auto where = "line " + std::to_string(line_no) + ", column " + std::to_string(c + 1);
      if (c == label_index) {
        Label v = 0;
        const auto res = std::from_chars(first, last, v);
        if (cell.empty() || res.ec != std::errc{} || res.ptr != last) {
          throw Error(Errc::NonNumericCell, "label is not a non-negative integer at " + where, name,
                      line_no, c + 1);
        }
        labels.push_back(v);
      } else {
        float v = 0.0f;
        const auto res = std::from_chars(first, last, v);
        if (cell.empty() || res.ptr != last || res.ec == std::errc::invalid_argument) {
          throw Error(Errc::NonNumericCell, "not a number at " + where, name, line_no, c + 1);
        }
        if (res.ec == std::errc::result_out_of_range || !std::isfinite(v)) {
          throw Error(Errc::NonFiniteValue, "value outside the finite float range at " + where,
                      name, line_no, c + 1);
        }
        values.push_back(v);
      }
    }
  }

  LabeledFeatureSet fs;
  fs.name = std::move(name);
  fs.labels = std::move(labels);
  fs.points = Eigen::Map<const PointMatrix<float>>(values.data(), static_cast<Eigen::Index>(rows),
                                                   static_cast<Eigen::Index>(cols - 1));
  validate(fs);
  return fs;
}

LabeledFeatureSet read_csv(const std::filesystem::path& path, std::string_view label_column) {
  const auto bytes = read_file_bytes(path);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  try {
    return parse_csv(text, label_column, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), e.detail() + " (" + path.string() + ")", path.string(), e.row(),
                e.col());
  }
}

std::string format_csv(const LabeledFeatureSet& fs, std::string_view label_column) {
  std::string out;
  for (std::size_t c = 0; c < fs.dim(); ++c) out += "x" + std::to_string(c) + ",";
  out += label_column;
  out += "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < fs.points.rows(); ++r) {
    for (Eigen::Index c = 0; c < fs.points.cols(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, fs.points(r, c));
      out.append(buf, res.ptr);
      out += ",";
    }
    out += std::to_string(fs.labels[static_cast<std::size_t>(r)]);
    out += "\n";
  }
  return out;
}

void write_csv(const LabeledFeatureSet& fs, const std::filesystem::path& path,
               std::string_view label_column) {
  const auto text = format_csv(fs, label_column);
  write_file_bytes(path, std::as_bytes(std::span(text.data(), text.size())));
}

}  // namespace sepidx
