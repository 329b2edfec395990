#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <random>

#include "oracle.hpp"
#include "sepidx/error.hpp"
#include "sepidx/formats.hpp"

using namespace sepidx;

namespace {

std::vector<std::byte> bytes_of(std::initializer_list<int> v) {
  std::vector<std::byte> out;
  for (int b : v) out.push_back(static_cast<std::byte>(b));
  return out;
}

std::optional<Errc> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Hand-assembled q=2, d=1, dtype 0 file: labels [0,1], data [0.0, 1.0].
std::vector<std::byte> minimal_file() {
  return bytes_of({'S', 'I', 'D', 'X', 1, 0, 0, 0,  //
                   2, 0, 0, 0, 0, 0, 0, 0,          // q
                   1, 0, 0, 0, 0, 0, 0, 0,          // d
                   0, 0, 0, 0, 1, 0, 0, 0,          // labels
                   0, 0, 0, 0, 0, 0, 0x80, 0x3f});  // 0.0f, 1.0f
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() /
             ("sepidx_formats_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Sidx, MinimalFileLayout) {
  // 24-byte header + 2 labels * 4 + 2 values * 4.
  const auto file = minimal_file();
  ASSERT_EQ(file.size(), 40u);
  EXPECT_EQ(sidx_file_size(2, 1, SidxDtype::F32), 40u);

  const auto fs = parse_sidx(file);
  EXPECT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs.dim(), 1u);
  EXPECT_EQ(fs.labels, (std::vector<Label>{0, 1}));
  EXPECT_EQ(fs.points(0, 0), 0.0f);
  EXPECT_EQ(fs.points(1, 0), 1.0f);
  EXPECT_FALSE(fs.narrowed_from_f64);
  EXPECT_EQ(encode_sidx(fs), file);
}

TEST(Sidx, TruncatedDataNamesBothSizes) {
  auto file = minimal_file();
  file.pop_back();
  try {
    parse_sidx(file);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SizeMismatch);
    EXPECT_NE(std::string(e.what()).find("40"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("39"), std::string::npos);
  }
  file = minimal_file();
  file.push_back(std::byte{0});
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::SizeMismatch);
  file.resize(10);
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::SizeMismatch);
}

TEST(Sidx, HeaderErrors) {
  auto file = minimal_file();
  file[0] = std::byte{'X'};
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::BadMagic);
  EXPECT_EQ(code_of([&] { parse_sidx(std::vector<std::byte>{}); }), Errc::BadMagic);
  file = minimal_file();
  file[4] = std::byte{2};
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::UnsupportedVersion);
  file = minimal_file();
  file[5] = std::byte{7};
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::UnsupportedVersion);
  file = minimal_file();
  file[7] = std::byte{1};
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::UnsupportedVersion);
  // A huge declared q must not be trusted for allocation.
  file = minimal_file();
  for (int i = 8; i < 16; ++i) file[i] = std::byte{0xff};
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::SizeMismatch);
}

TEST(Sidx, NonFiniteAndTooSmallSetsAreRejected) {
  auto file = minimal_file();
  const auto nan = std::bit_cast<std::uint32_t>(std::numeric_limits<float>::quiet_NaN());
  for (int i = 0; i < 4; ++i) file[36 + i] = static_cast<std::byte>((nan >> (8 * i)) & 0xff);
  EXPECT_EQ(code_of([&] { parse_sidx(file); }), Errc::NonFiniteValue);

  const auto one = bytes_of({'S', 'I', 'D', 'X', 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0,
                             1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_EQ(code_of([&] { parse_sidx(one); }), Errc::TooFewPoints);
}

TEST(Sidx, DoubleInputIsNarrowedToNearestFloat) {
  BasicFeatureSet<double> fs;
  fs.points.resize(3, 2);
  // 1 + 2^-24 is halfway between two floats and rounds to even (1.0);
  // 1 + 3 * 2^-24 rounds up to 1 + 2^-22.
  fs.points << 1.0 + std::ldexp(1.0, -24), 0.1, 1.0 + 3 * std::ldexp(1.0, -24), -2.5, 1e30, 7.0;
  fs.labels = {3, 1, 3};
  const auto bytes = encode_sidx(fs);
  EXPECT_EQ(bytes.size(), sidx_file_size(3, 2, SidxDtype::F64));
  EXPECT_EQ(static_cast<int>(bytes[5]), 1);

  const auto back = parse_sidx(bytes);
  EXPECT_TRUE(back.narrowed_from_f64);
  EXPECT_EQ(back.points(0, 0), 1.0f);
  EXPECT_EQ(back.points(1, 0), 1.0f + std::ldexp(1.0f, -22));
  EXPECT_EQ(back.points(0, 1), 0.1f);
  EXPECT_EQ(back.points(2, 0), 1e30f);
  EXPECT_EQ(back.labels, fs.labels);
}

TEST(Sidx, RandomRoundTripIsBitExact) {
  std::mt19937_64 rng(21);
  const auto dir = temp_dir();
  for (int round = 0; round < 50; ++round) {
    const std::size_t q = 2 + rng() % 100, d = 1 + rng() % 20;
    LabeledFeatureSet fs;
    fs.points.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < fs.points.size(); ++i) {
      // Random finite bit patterns, including subnormals and signed zeros.
      float v;
      do v = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
      while (!std::isfinite(v));
      fs.points.data()[i] = v;
    }
    for (std::size_t i = 0; i < q; ++i) fs.labels.push_back(static_cast<Label>(rng()));
    const auto path = dir / "round.sidx";
    write_sidx(fs, path);
    EXPECT_EQ(std::filesystem::file_size(path), sidx_file_size(q, d, SidxDtype::F32));
    const auto back = read_sidx(path);
    ASSERT_EQ(back.labels, fs.labels);
    ASSERT_EQ(std::memcmp(back.points.data(), fs.points.data(), q * d * sizeof(float)), 0);
    ASSERT_EQ(encode_sidx(back), read_file_bytes(path));
  }
  std::filesystem::remove_all(dir);
}

TEST(Sidx, MissingFileIsAnIoError) {
  try {
    read_sidx("/nonexistent/dir/x.sidx");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Io);
    EXPECT_NE(std::string(e.what()).find("no such file: /nonexistent/dir/x.sidx"), std::string::npos);
  }
}

TEST(Csv, BasicExample) {
  const auto fs = parse_csv("x0,x1,label\n0,0,0\n1,0,1", "label");
  EXPECT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs.dim(), 2u);
  EXPECT_EQ(fs.labels, (std::vector<Label>{0, 1}));
  EXPECT_EQ(fs.points(1, 0), 1.0f);
}

TEST(Csv, LabelColumnCanBeAnywhere) {
  const auto fs = parse_csv("cls, a ,b\r\n2, 1.5, -3\r\n4,2e1,0.25\r\n\r\n", "cls");
  EXPECT_EQ(fs.labels, (std::vector<Label>{2, 4}));
  EXPECT_EQ(fs.points(0, 0), 1.5f);
  EXPECT_EQ(fs.points(1, 0), 20.0f);
  EXPECT_EQ(fs.points(1, 1), 0.25f);
}

TEST(Csv, Errors) {
  try {
    parse_csv("x0,label\n0,0\n1\n", "label");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RaggedRows);
    EXPECT_EQ(e.row(), 3u);
  }
  try {
    parse_csv("x0,x1,label\n0,0,0\n1,abc,1\n", "label");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonNumericCell);
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.col(), 2u);
  }
  EXPECT_EQ(code_of([] { parse_csv("x0,y\n0,0\n1,1\n", "label"); }), Errc::MissingLabelColumn);
  EXPECT_EQ(code_of([] { parse_csv("", "label"); }), Errc::MissingLabelColumn);
  EXPECT_EQ(code_of([] { parse_csv("x0,label\n0,-1\n1,1\n", "label"); }), Errc::NonNumericCell);
  EXPECT_EQ(code_of([] { parse_csv("x0,label\n1e99,0\n1,1\n", "label"); }), Errc::NonFiniteValue);
  EXPECT_EQ(code_of([] { parse_csv("x0,label\n0,0\n", "label"); }), Errc::TooFewPoints);
  EXPECT_EQ(code_of([] { parse_csv("label\n0\n1\n", "label"); }), Errc::DimensionMismatch);
}

TEST(Csv, GeneratedHundredRowsRoundTrip) {
  std::mt19937_64 rng(5);
  const auto fs = oracle::random_set(rng, 100, 4, 5);
  const auto text = format_csv(fs);
  const auto back = parse_csv(text, "label");
  ASSERT_EQ(back.labels, fs.labels);
  // Shortest round-trip formatting makes this exact, not just within float precision.
  EXPECT_EQ(back.points, fs.points);
  EXPECT_EQ(format_csv(back), text);
}

TEST(Parsers, RandomBytesGiveValueOrError) {
  std::mt19937_64 rng(77);
  const auto seed_file = minimal_file();
  for (int round = 0; round < 20000; ++round) {
    std::vector<std::byte> buf;
    if (round % 2) {
      buf = seed_file;
      const int flips = 1 + static_cast<int>(rng() % 4);
      for (int f = 0; f < flips; ++f) buf[rng() % buf.size()] = static_cast<std::byte>(rng());
      if (rng() % 4 == 0) buf.resize(rng() % (buf.size() + 8));
    } else {
      buf.resize(rng() % 64);
      for (auto& b : buf) b = static_cast<std::byte>(rng());
    }
    try {
      const auto fs = parse_sidx(buf);
      EXPECT_GE(fs.size(), 2u);
    } catch (const Error&) {
    }
    const std::string_view text(reinterpret_cast<const char*>(buf.data()), buf.size());
    try {
      parse_csv(text, "label");
    } catch (const Error&) {
    }
  }
}
