#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "geoseg/tensor.hpp"

namespace geoseg {

// CST layout (little-endian):
//   "CSTK" | u16 version=1 | u8 dtype=1 (float32) | u8 reserved=0 |
//   u32 height | u32 width | u32 channels | float32 payload (pixel-major)
inline constexpr std::size_t kCstHeaderSize = 20;
inline constexpr std::uint16_t kCstVersion = 1;
inline constexpr std::uint8_t kCstDtypeFloat32 = 1;

std::vector<std::byte> encode_cst(const ChannelStack& stack);
ChannelStack decode_cst(std::span<const std::byte> bytes);

ChannelStack read_channel_stack(const std::filesystem::path& path);
void write_channel_stack(const ChannelStack& stack, const std::filesystem::path& path);

// Distance maps travel as single-channel CST files.
ChannelStack to_channel_stack(const DistanceMap& map);
DistanceMap read_distance_map(const std::filesystem::path& path);
void write_distance_map(const DistanceMap& map, const std::filesystem::path& path);

// Binary P5 PGM, maxval 255. Import rule: pixel > 127 -> 1.
std::vector<std::byte> encode_pgm(const BinaryMask& mask);
BinaryMask decode_pgm(std::span<const std::byte> bytes);
BinaryMask read_mask_pgm(const std::filesystem::path& path);
void write_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path);

// Raw 8-bit rasters (P5 for one channel, P6 for three) used for previews.
std::vector<std::byte> encode_pnm8(std::uint32_t height, std::uint32_t width,
                                   std::uint32_t channels, std::span<const std::uint8_t> pixels);

// Scribbles: JSON array of {"x":int,"y":int,"label":int}.
ScribbleSet parse_scribbles_json(const std::string& text, std::uint32_t height,
                                 std::uint32_t width);
std::string scribbles_to_json(const ScribbleSet& scribbles);
ScribbleSet read_scribbles_json(const std::filesystem::path& path, std::uint32_t height,
                                std::uint32_t width);
void write_scribbles_json(const ScribbleSet& scribbles, const std::filesystem::path& path);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

/// Shortest decimal text that parses back to the same value.
std::string format_float(double value);

}  // namespace geoseg
