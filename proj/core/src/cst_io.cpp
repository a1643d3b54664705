#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "geoseg/error.hpp"
#include "geoseg/io.hpp"

namespace geoseg {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'T', 'K'};

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto bits = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::byte>((bits >> (8 * i)) & 0xFFu));
  }
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  std::make_unsigned_t<T> bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<std::make_unsigned_t<T>>(
        static_cast<std::make_unsigned_t<T>>(std::to_integer<std::uint8_t>(bytes[offset + i]))
        << (8 * i));
  }
  return static_cast<T>(bits);
}

}  // namespace

std::vector<std::byte> encode_cst(const ChannelStack& stack) {
  std::vector<std::byte> out;
  out.reserve(kCstHeaderSize + stack.data().size() * sizeof(float));
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_le<std::uint16_t>(out, kCstVersion);
  put_le<std::uint8_t>(out, kCstDtypeFloat32);
  put_le<std::uint8_t>(out, 0);
  put_le<std::uint32_t>(out, stack.height());
  put_le<std::uint32_t>(out, stack.width());
  put_le<std::uint32_t>(out, stack.channels());
  for (float v : stack.data()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

ChannelStack decode_cst(std::span<const std::byte> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "CST: bad magic (expected \"CSTK\")");
  }
  if (bytes.size() < kCstHeaderSize) {
    throw Error(ErrorCode::kTruncated, "CST: header truncated");
  }
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kCstVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "CST: unsupported version " + std::to_string(version));
  }
  const auto dtype = get_le<std::uint8_t>(bytes, 6);
  if (dtype != kCstDtypeFloat32) {
    throw Error(ErrorCode::kUnsupportedDtype, "CST: unsupported dtype " + std::to_string(dtype));
  }
  if (get_le<std::uint8_t>(bytes, 7) != 0) {
    throw Error(ErrorCode::kMalformedHeader, "CST: reserved byte must be 0");
  }
  const auto height = get_le<std::uint32_t>(bytes, 8);
  const auto width = get_le<std::uint32_t>(bytes, 12);
  const auto channels = get_le<std::uint32_t>(bytes, 16);
  if (height == 0 || width == 0 || channels == 0) {
    throw Error(ErrorCode::kMalformedHeader, "CST: zero dimension");
  }
  const std::uint64_t count = std::uint64_t{height} * width * channels;
  constexpr std::uint64_t kMaxValues = std::numeric_limits<std::uint32_t>::max();
  if (std::uint64_t{height} * width > kMaxValues || count > kMaxValues) {
    throw Error(ErrorCode::kDimensionOverflow, "CST: dimensions too large");
  }
  const std::uint64_t expected = kCstHeaderSize + count * sizeof(float);
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncated, "CST: payload truncated (" +
                                           std::to_string(bytes.size()) + " of " +
                                           std::to_string(expected) + " bytes)");
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kMalformedHeader, "CST: trailing bytes after payload");
  }
  std::vector<float> data(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, kCstHeaderSize + 4 * i));
  }
  return ChannelStack(height, width, channels, std::move(data));
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed: " + path.string());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

ChannelStack read_channel_stack(const std::filesystem::path& path) {
  return decode_cst(read_file_bytes(path));
}

void write_channel_stack(const ChannelStack& stack, const std::filesystem::path& path) {
  write_file_bytes(path, encode_cst(stack));
}

ChannelStack to_channel_stack(const DistanceMap& map) {
  return ChannelStack(map.height(), map.width(), 1,
                      std::vector<float>(map.data().begin(), map.data().end()));
}

DistanceMap read_distance_map(const std::filesystem::path& path) {
  auto stack = read_channel_stack(path);
  if (stack.channels() != 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "distance map file must have 1 channel: " + path.string());
  }
  return DistanceMap(stack.height(), stack.width(),
                     std::vector<float>(stack.data().begin(), stack.data().end()));
}

void write_distance_map(const DistanceMap& map, const std::filesystem::path& path) {
  write_channel_stack(to_channel_stack(map), path);
}

}  // namespace geoseg
