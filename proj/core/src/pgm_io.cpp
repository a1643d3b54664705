#include <cctype>
#include <charconv>
#include <cstring>
#include <limits>
#include <string>

#include "geoseg/error.hpp"
#include "geoseg/io.hpp"

namespace geoseg {

namespace {

// Header tokenizer for PNM: whitespace separated, '#' comments run to end of line.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !is_space(peek()) && peek() != '#') {
      out.push_back(static_cast<char>(peek()));
      ++pos_;
    }
    if (out.empty()) throw Error(ErrorCode::kMalformedHeader, "PGM: unexpected end of header");
    return out;
  }

  std::uint64_t number() {
    const auto text = token();
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc::result_out_of_range) {
      throw Error(ErrorCode::kDimensionOverflow, "PGM: number too large: " + text);
    }
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kMalformedHeader, "PGM: expected a number, got '" + text + "'");
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !is_space(peek())) {
      throw Error(ErrorCode::kMalformedHeader, "PGM: missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  static bool is_space(unsigned char c) { return std::isspace(c) != 0; }
  unsigned char peek() const { return std::to_integer<unsigned char>(bytes_[pos_]); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (pos_ < bytes_.size() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::byte> pnm_header(const char* magic, std::uint32_t height, std::uint32_t width) {
  const std::string header =
      std::string(magic) + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::byte> out(header.size());
  std::memcpy(out.data(), header.data(), header.size());
  return out;
}

}  // namespace

std::vector<std::byte> encode_pgm(const BinaryMask& mask) {
  auto out = pnm_header("P5", mask.height(), mask.width());
  out.reserve(out.size() + mask.pixel_count());
  for (auto v : mask.data()) out.push_back(v ? std::byte{255} : std::byte{0});
  return out;
}

std::vector<std::byte> encode_pnm8(std::uint32_t height, std::uint32_t width,
                                   std::uint32_t channels,
                                   std::span<const std::uint8_t> pixels) {
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PNM: channels must be 1 or 3");
  }
  if (pixels.size() != static_cast<std::size_t>(height) * width * channels) {
    throw Error(ErrorCode::kDimensionMismatch, "PNM: pixel buffer size mismatch");
  }
  auto out = pnm_header(channels == 1 ? "P5" : "P6", height, width);
  for (auto v : pixels) out.push_back(static_cast<std::byte>(v));
  return out;
}

BinaryMask decode_pgm(std::span<const std::byte> bytes) {
  HeaderReader reader(bytes);
  if (reader.token() != "P5") {
    throw Error(ErrorCode::kMalformedHeader, "PGM: expected binary P5 magic");
  }
  const auto width = reader.number();
  const auto height = reader.number();
  const auto maxval = reader.number();
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kMalformedHeader, "PGM: zero dimension");
  }
  constexpr std::uint64_t kMaxPixels = std::numeric_limits<std::uint32_t>::max();
  if (width > kMaxPixels || height > kMaxPixels || width * height > kMaxPixels) {
    throw Error(ErrorCode::kDimensionOverflow, "PGM: dimensions too large");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::kMalformedHeader, "PGM: maxval must be 255");
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width * height);
  if (bytes.size() < offset + count) {
    throw Error(ErrorCode::kTruncated, "PGM: raster truncated");
  }
  std::vector<std::uint8_t> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = std::to_integer<std::uint8_t>(bytes[offset + i]) > 127 ? 1 : 0;
  }
  return BinaryMask(static_cast<std::uint32_t>(height), static_cast<std::uint32_t>(width),
                    std::move(data));
}

BinaryMask read_mask_pgm(const std::filesystem::path& path) {
  return decode_pgm(read_file_bytes(path));
}

void write_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
  write_file_bytes(path, encode_pgm(mask));
}

}  // namespace geoseg
