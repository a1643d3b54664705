#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geoseg/distance.hpp"
#include "geoseg/tensor.hpp"

namespace geoseg::detail {

inline double edge_cost(std::span<const float> a, std::span<const float> b, double spatial_sq,
                        double lambda) {
  double diff_sq = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = static_cast<double>(a[c]) - static_cast<double>(b[c]);
    diff_sq += d * d;
  }
  return std::sqrt((1.0 - lambda) * spatial_sq + lambda * diff_sq);
}

// Costs of the four "outgoing" edges of every pixel: E (+1,0), S (0,+1),
// SE (+1,+1), SW (-1,+1). Every undirected grid edge appears exactly once,
// so both solvers see identical per-edge doubles.
class EdgeCosts {
 public:
  enum Dir { kEast = 0, kSouth = 1, kSouthEast = 2, kSouthWest = 3 };

  EdgeCosts(const ChannelStack& stack, const DistanceParams& params)
      : height_(stack.height()), width_(stack.width()), diagonal_(params.connectivity == 8) {
    const std::size_t n = stack.pixel_count();
    const int dirs = diagonal_ ? 4 : 2;
    for (int d = 0; d < dirs; ++d) cost_[d].assign(n, 0.0);
    const double lambda = params.lambda;
    for (std::uint32_t y = 0; y < height_; ++y) {
      for (std::uint32_t x = 0; x < width_; ++x) {
        const std::size_t i = index(x, y);
        const auto here = stack.pixel(i);
        if (x + 1 < width_) cost_[kEast][i] = edge_cost(here, stack.pixel(i + 1), 1.0, lambda);
        if (y + 1 < height_) {
          cost_[kSouth][i] = edge_cost(here, stack.pixel(i + width_), 1.0, lambda);
          if (diagonal_) {
            if (x + 1 < width_) {
              cost_[kSouthEast][i] = edge_cost(here, stack.pixel(i + width_ + 1), 2.0, lambda);
            }
            if (x > 0) {
              cost_[kSouthWest][i] = edge_cost(here, stack.pixel(i + width_ - 1), 2.0, lambda);
            }
          }
        }
      }
    }
  }

  std::size_t index(std::uint32_t x, std::uint32_t y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t width() const noexcept { return width_; }
  bool diagonal() const noexcept { return diagonal_; }
  double at(Dir d, std::size_t i) const noexcept { return cost_[d][i]; }

 private:
  std::uint32_t height_;
  std::uint32_t width_;
  bool diagonal_;
  std::vector<double> cost_[4];
};

DistanceMap to_distance_map(std::uint32_t height, std::uint32_t width,
                            std::span<const double> values);

void require_matching(const ChannelStack& stack, const ScribbleSet& seeds);

}  // namespace geoseg::detail
