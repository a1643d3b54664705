#include "geoseg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

#include "geoseg/error.hpp"

namespace geoseg {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kEmptySeeds: return "empty seed set";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kUnsupportedDtype: return "unsupported dtype";
    case ErrorCode::kTruncated: return "truncated payload";
    case ErrorCode::kMalformedHeader: return "malformed header";
    case ErrorCode::kDimensionOverflow: return "dimension overflow";
    case ErrorCode::kIoFailure: return "i/o failure";
    case ErrorCode::kNumerical: return "numerical failure";
  }
  return "unknown";
}

namespace {

void require_nonzero_dims(std::uint32_t height, std::uint32_t width, const char* what) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": height and width must be >= 1");
  }
}

}  // namespace

ChannelStack::ChannelStack(std::uint32_t height, std::uint32_t width, std::uint32_t channels,
                           std::vector<float> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  require_nonzero_dims(height, width, "ChannelStack");
  if (channels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "ChannelStack: channels must be >= 1");
  }
  if (data_.size() != pixel_count() * channels_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ChannelStack: data length " + std::to_string(data_.size()) +
                    " != height*width*channels");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kNonFinite, "ChannelStack: non-finite value in data");
  }
}

ScribbleSet::ScribbleSet(std::uint32_t height, std::uint32_t width,
                         std::vector<ScribblePoint> points)
    : height_(height), width_(width), points_(std::move(points)) {
  require_nonzero_dims(height, width, "ScribbleSet");
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint8_t>> seen;
  for (const auto& p : points_) {
    if (p.x >= width_ || p.y >= height_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ScribbleSet: point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") outside " + std::to_string(height_) + "x" + std::to_string(width_));
    }
    if (!seen.emplace(p.x, p.y, p.label).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ScribbleSet: duplicate point (" + std::to_string(p.x) + ", " +
                      std::to_string(p.y) + ", label " + std::to_string(p.label) + ")");
    }
  }
}

std::vector<std::size_t> ScribbleSet::foreground_indices() const {
  std::vector<std::size_t> indices;
  for (const auto& p : points_) {
    if (p.label == kForegroundLabel) {
      indices.push_back(static_cast<std::size_t>(p.y) * width_ + p.x);
    }
  }
  if (indices.empty()) {
    throw Error(ErrorCode::kEmptySeeds, "scribble set has no foreground (label 1) points");
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

DistanceMap::DistanceMap(std::uint32_t height, std::uint32_t width, std::vector<float> data,
                         bool normalized)
    : height_(height), width_(width), data_(std::move(data)), normalized_(normalized) {
  require_nonzero_dims(height, width, "DistanceMap");
  if (data_.size() != pixel_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "DistanceMap: data length != height*width");
  }
  for (float v : data_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite, "DistanceMap: non-finite value");
    }
    if (v < 0.0f || (normalized_ && v > 1.0f)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "DistanceMap: value " + std::to_string(v) + " out of range");
    }
  }
}

BinaryMask::BinaryMask(std::uint32_t height, std::uint32_t width,
                       std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  require_nonzero_dims(height, width, "BinaryMask");
  if (data_.size() != pixel_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "BinaryMask: data length != height*width");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v <= 1; })) {
    throw Error(ErrorCode::kInvalidArgument, "BinaryMask: values must be 0 or 1");
  }
}

BinaryMask BinaryMask::zeros(std::uint32_t height, std::uint32_t width) {
  return BinaryMask(height, width,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, 0));
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

}  // namespace geoseg
