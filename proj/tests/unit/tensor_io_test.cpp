#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "geoseg/error.hpp"
#include "geoseg/io.hpp"
#include "geoseg/tensor.hpp"
#include "oracles.hpp"

namespace geoseg {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("geoseg_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::vector<std::byte> bytes_of(std::initializer_list<int> values) {
  std::vector<std::byte> out;
  for (int v : values) out.push_back(static_cast<std::byte>(v));
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected geoseg::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(ChannelStack, RejectsBadShapesAndValues) {
  EXPECT_EQ(code_of([] { ChannelStack(0, 2, 1, {}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ChannelStack(2, 2, 0, {}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ChannelStack(2, 2, 1, {1, 2, 3}); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([] { ChannelStack(1, 1, 1, {std::nanf("")}); }), ErrorCode::kNonFinite);
  EXPECT_EQ(code_of([] { ChannelStack(1, 1, 1, {std::numeric_limits<float>::infinity()}); }),
            ErrorCode::kNonFinite);
}

TEST(ChannelStack, PixelMajorIndexing) {
  const ChannelStack s(2, 2, 2, {0, 1, 2, 3, 4, 5, 6, 7});
  EXPECT_EQ(s.at(0, 1, 0), 2.0f);
  EXPECT_EQ(s.at(1, 0, 1), 5.0f);
  EXPECT_EQ(s.pixel(3)[1], 7.0f);
}

TEST(ScribbleSet, BoundsDuplicatesAndForeground) {
  EXPECT_EQ(code_of([] { ScribbleSet(2, 3, {{3, 0, 1}}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ScribbleSet(2, 3, {{0, 2, 1}}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ScribbleSet(2, 3, {{1, 1, 1}, {1, 1, 1}}); }),
            ErrorCode::kInvalidArgument);
  // same pixel under two labels is fine
  const ScribbleSet mixed(2, 3, {{1, 1, 1}, {1, 1, 2}, {0, 0, 2}});
  EXPECT_EQ(mixed.foreground_indices(), (std::vector<std::size_t>{4}));
  const ScribbleSet background_only(2, 3, {{0, 0, 2}});
  EXPECT_EQ(code_of([&] { background_only.foreground_indices(); }), ErrorCode::kEmptySeeds);
}

TEST(DistanceMap, Invariants) {
  EXPECT_EQ(code_of([] { DistanceMap(1, 2, {0.0f, -1.0f}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { DistanceMap(1, 2, {0.0f, 1.5f}, true); }), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(DistanceMap(1, 2, {0.0f, 1.5f}, false));
}

TEST(Cst, TwoByTwoRoundTrip) {
  TempDir dir;
  const ChannelStack stack(2, 2, 1, {0, 1, 2, 3});
  write_channel_stack(stack, dir / "a.cst");
  EXPECT_EQ(read_channel_stack(dir / "a.cst"), stack);
}

TEST(Cst, SingleValueFileLayout) {
  const auto bytes = encode_cst(ChannelStack(1, 1, 1, {0.0f}));
  ASSERT_EQ(bytes.size(), kCstHeaderSize + 4);
  EXPECT_EQ(bytes, bytes_of({'C', 'S', 'T', 'K', 1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0,
                             0, 0, 0, 0}));
  const auto three = encode_cst(ChannelStack(2, 3, 1, {1.0f, 0, 0, 0, 0, 0}));
  // height then width then channels, little-endian; 1.0f = 0x3F800000
  EXPECT_EQ(std::to_integer<int>(three[8]), 2);
  EXPECT_EQ(std::to_integer<int>(three[12]), 3);
  EXPECT_EQ(std::to_integer<int>(three[20 + 3]), 0x3F);
  EXPECT_EQ(std::to_integer<int>(three[20 + 2]), 0x80);
}

TEST(Cst, DistinctErrors) {
  auto good = encode_cst(ChannelStack(2, 2, 1, {0, 1, 2, 3}));

  auto magic = good;
  magic[0] = magic[1] = magic[2] = magic[3] = std::byte{'X'};
  EXPECT_EQ(code_of([&] { decode_cst(magic); }), ErrorCode::kBadMagic);

  auto version = good;
  version[4] = std::byte{2};
  EXPECT_EQ(code_of([&] { decode_cst(version); }), ErrorCode::kVersionMismatch);

  auto dtype = good;
  dtype[6] = std::byte{2};
  EXPECT_EQ(code_of([&] { decode_cst(dtype); }), ErrorCode::kUnsupportedDtype);

  auto truncated = good;
  truncated.pop_back();
  EXPECT_EQ(code_of([&] { decode_cst(truncated); }), ErrorCode::kTruncated);
  EXPECT_EQ(code_of([&] { decode_cst(std::span(good).first(10)); }), ErrorCode::kTruncated);

  auto nan = good;
  const float bad = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data() + kCstHeaderSize, &bad, 4);
  EXPECT_EQ(code_of([&] { decode_cst(nan); }), ErrorCode::kNonFinite);

  auto huge = good;
  for (int i = 8; i < 20; ++i) huge[i] = std::byte{0xFF};
  EXPECT_EQ(code_of([&] { decode_cst(huge); }), ErrorCode::kDimensionOverflow);
}

TEST(Cst, MissingFileIsIoFailure) {
  EXPECT_EQ(code_of([] { read_channel_stack("/nonexistent/geoseg/x.cst"); }),
            ErrorCode::kIoFailure);
}

// Any valid file re-encodes to the same bytes, including -0.0 and subnormals.
TEST(Cst, RandomFilesRoundTripByteExact) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint32_t> dim(1, 9);
  std::uniform_int_distribution<std::uint32_t> raw_bits;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t h = dim(rng), w = dim(rng), c = dim(rng);
    auto header = encode_cst(ChannelStack(h, w, c, std::vector<float>(std::size_t{h} * w * c)));
    header.resize(kCstHeaderSize);
    std::vector<std::byte> file = header;
    for (std::size_t i = 0; i < std::size_t{h} * w * c; ++i) {
      std::uint32_t bits = raw_bits(rng);
      if ((bits & 0x7F800000u) == 0x7F800000u) bits &= ~0x00800000u;  // keep finite
      for (int b = 0; b < 4; ++b) file.push_back(static_cast<std::byte>((bits >> (8 * b)) & 0xFF));
    }
    const auto stack = decode_cst(file);
    ASSERT_EQ(encode_cst(stack), file) << "trial " << trial;
  }
}

TEST(Pgm, AllOnesAndAllZeros) {
  const std::string ones = "P5\n3 2\n255\n";
  std::vector<std::byte> file(ones.size());
  std::memcpy(file.data(), ones.data(), ones.size());
  auto white = file;
  white.insert(white.end(), 6, std::byte{255});
  EXPECT_EQ(decode_pgm(white).count(), 6u);
  auto black = file;
  black.insert(black.end(), 6, std::byte{0});
  EXPECT_EQ(decode_pgm(black).count(), 0u);
}

TEST(Pgm, MidpointRuleAndComments) {
  const std::string header = "P5 # binary\n# a comment line\n4 1\n255\n";
  std::vector<std::byte> file(header.size());
  std::memcpy(file.data(), header.data(), header.size());
  for (int v : {0, 127, 128, 255}) file.push_back(static_cast<std::byte>(v));
  const auto mask = decode_pgm(file);
  EXPECT_EQ(std::vector<std::uint8_t>(mask.data().begin(), mask.data().end()),
            (std::vector<std::uint8_t>{0, 0, 1, 1}));
}

TEST(Pgm, MalformedHeaders) {
  auto decode_text = [](const std::string& text) {
    std::vector<std::byte> file(text.size());
    std::memcpy(file.data(), text.data(), text.size());
    return decode_pgm(file);
  };
  EXPECT_EQ(code_of([&] { decode_text("P2\n1 1\n255\n0"); }), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { decode_text("P5\n1 x\n255\n0"); }), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { decode_text("P5\n1 1\n65535\n00"); }), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { decode_text("P5\n1 1"); }), ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([&] { decode_text("P5\n2 2\n255\n\x01"); }), ErrorCode::kTruncated);
  EXPECT_EQ(code_of([&] { decode_text("P5\n99999999999 99999999999\n255\n"); }),
            ErrorCode::kDimensionOverflow);
  EXPECT_EQ(code_of([&] { decode_text("P5\n99999999999999999999999 1\n255\n"); }),
            ErrorCode::kDimensionOverflow);
}

TEST(Pgm, RandomMasksRoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint32_t> dim(1, 40);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mask = oracle::random_mask(rng, dim(rng), dim(rng), 0.4);
    write_mask_pgm(mask, dir / "m.pgm");
    ASSERT_EQ(read_mask_pgm(dir / "m.pgm"), mask);
  }
}

TEST(Scribbles, JsonRoundTripAndValidation) {
  const auto set = parse_scribbles_json(R"([{"x":1,"y":0,"label":1},{"x":2,"y":1}])", 2, 3);
  ASSERT_EQ(set.points().size(), 2u);
  EXPECT_EQ(set.points()[1].label, 1);
  EXPECT_EQ(parse_scribbles_json(scribbles_to_json(set), 2, 3), set);

  EXPECT_EQ(code_of([] { parse_scribbles_json(R"([{"x":3,"y":0}])", 2, 3); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_scribbles_json(R"([{"x":-1,"y":0}])", 2, 3); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_scribbles_json(R"({"x":0})", 2, 3); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_scribbles_json("not json", 2, 3); }),
            ErrorCode::kInvalidArgument);
}

TEST(FormatFloat, ShortestRoundTrip) {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 2.5e-9}) {
    EXPECT_EQ(std::stod(format_float(v)), v);
  }
  EXPECT_EQ(format_float(0.5), "0.5");
}

}  // namespace
}  // namespace geoseg
