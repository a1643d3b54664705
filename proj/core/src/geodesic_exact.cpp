#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "edge_costs.hpp"
#include "geoseg/error.hpp"

namespace geoseg {

void DistanceParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be in [0, 1]");
  }
  if (connectivity != 4 && connectivity != 8) {
    throw Error(ErrorCode::kInvalidArgument, "connectivity must be 4 or 8");
  }
  if (max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  }
  if (!(convergence_epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "convergence_epsilon must be > 0");
  }
  if (threads < 1) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1");
}

namespace detail {

DistanceMap to_distance_map(std::uint32_t height, std::uint32_t width,
                            std::span<const double> values) {
  std::vector<float> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<float>(values[i]);
  return DistanceMap(height, width, std::move(out));
}

void require_matching(const ChannelStack& stack, const ScribbleSet& seeds) {
  if (stack.height() != seeds.height() || stack.width() != seeds.width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scribbles drawn on " + std::to_string(seeds.height()) + "x" +
                    std::to_string(seeds.width()) + " but stack is " +
                    std::to_string(stack.height()) + "x" + std::to_string(stack.width()));
  }
}

}  // namespace detail

DistanceMap geodesic_exact(const ChannelStack& stack, const ScribbleSet& seeds,
                           const DistanceParams& params) {
  params.validate();
  detail::require_matching(stack, seeds);
  const auto sources = seeds.foreground_indices();
  const detail::EdgeCosts costs(stack, params);
  using Dir = detail::EdgeCosts::Dir;

  const std::uint32_t w = stack.width();
  const std::uint32_t h = stack.height();
  std::vector<double> dist(stack.pixel_count(), std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> settled(stack.pixel_count(), 0);

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (auto s : sources) {
    dist[s] = 0.0;
    queue.emplace(0.0, s);
  }

  auto relax = [&](std::size_t to, double candidate) {
    if (candidate < dist[to]) {
      dist[to] = candidate;
      queue.emplace(candidate, to);
    }
  };

  while (!queue.empty()) {
    const auto [d, i] = queue.top();
    queue.pop();
    if (settled[i]) continue;
    settled[i] = 1;
    const auto x = static_cast<std::uint32_t>(i % w);
    const auto y = static_cast<std::uint32_t>(i / w);
    if (x + 1 < w) relax(i + 1, d + costs.at(Dir::kEast, i));
    if (x > 0) relax(i - 1, d + costs.at(Dir::kEast, i - 1));
    if (y + 1 < h) relax(i + w, d + costs.at(Dir::kSouth, i));
    if (y > 0) relax(i - w, d + costs.at(Dir::kSouth, i - w));
    if (costs.diagonal()) {
      if (y + 1 < h && x + 1 < w) relax(i + w + 1, d + costs.at(Dir::kSouthEast, i));
      if (y > 0 && x > 0) relax(i - w - 1, d + costs.at(Dir::kSouthEast, i - w - 1));
      if (y + 1 < h && x > 0) relax(i + w - 1, d + costs.at(Dir::kSouthWest, i));
      if (y > 0 && x + 1 < w) relax(i - w + 1, d + costs.at(Dir::kSouthWest, i - w + 1));
    }
  }
  return detail::to_distance_map(h, w, dist);
}

}  // namespace geoseg
