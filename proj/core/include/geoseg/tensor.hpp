#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace geoseg {

/// H x W x C float raster, pixel-major: index = (y * width + x) * channels + c.
/// Holds hyperspectral cubes, feature stacks and RGB reconstructions alike.
class ChannelStack {
 public:
  ChannelStack(std::uint32_t height, std::uint32_t width, std::uint32_t channels,
               std::vector<float> data);

  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }

  std::span<const float> data() const noexcept { return data_; }
  std::span<const float> pixel(std::size_t index) const noexcept {
    return {data_.data() + index * channels_, channels_};
  }
  float at(std::uint32_t y, std::uint32_t x, std::uint32_t c) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  friend bool operator==(const ChannelStack&, const ChannelStack&) = default;

 private:
  std::uint32_t height_;
  std::uint32_t width_;
  std::uint32_t channels_;
  std::vector<float> data_;
};

struct ScribblePoint {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint8_t label = 1;

  friend bool operator==(const ScribblePoint&, const ScribblePoint&) = default;
};

inline constexpr std::uint8_t kForegroundLabel = 1;

/// User scribbles bound to the raster they were drawn on.
class ScribbleSet {
 public:
  ScribbleSet(std::uint32_t height, std::uint32_t width, std::vector<ScribblePoint> points);

  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t width() const noexcept { return width_; }
  const std::vector<ScribblePoint>& points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }

  /// Sorted, de-duplicated linear indices (y * width + x) of label-1 points.
  /// Throws ErrorCode::kEmptySeeds when there are none.
  std::vector<std::size_t> foreground_indices() const;

  friend bool operator==(const ScribbleSet&, const ScribbleSet&) = default;

 private:
  std::uint32_t height_;
  std::uint32_t width_;
  std::vector<ScribblePoint> points_;
};

/// Per-pixel non-negative distance field, either raw or min-max normalized.
class DistanceMap {
 public:
  DistanceMap(std::uint32_t height, std::uint32_t width, std::vector<float> data,
              bool normalized = false);

  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }
  bool normalized() const noexcept { return normalized_; }
  std::span<const float> data() const noexcept { return data_; }
  float at(std::uint32_t y, std::uint32_t x) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  friend bool operator==(const DistanceMap&, const DistanceMap&) = default;

 private:
  std::uint32_t height_;
  std::uint32_t width_;
  std::vector<float> data_;
  bool normalized_;
};

/// One byte per pixel, values 0 or 1.
class BinaryMask {
 public:
  BinaryMask(std::uint32_t height, std::uint32_t width, std::vector<std::uint8_t> data);
  static BinaryMask zeros(std::uint32_t height, std::uint32_t width);

  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::span<const std::uint8_t> data() const noexcept { return data_; }
  bool at(std::uint32_t y, std::uint32_t x) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  std::size_t count() const noexcept;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::uint32_t height_;
  std::uint32_t width_;
  std::vector<std::uint8_t> data_;
};

}  // namespace geoseg
