#include "geoseg/skeleton.hpp"

#include <array>
#include <limits>

#include "geoseg/error.hpp"

namespace geoseg {

namespace {

class Thinning {
 public:
  explicit Thinning(const BinaryMask& mask)
      : h_(mask.height()), w_(mask.width()), px_(mask.data().begin(), mask.data().end()) {}

  BinaryMask run() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int pass = 0; pass < 2; ++pass) changed |= sub_iteration(pass);
    }
    return BinaryMask(h_, w_, std::move(px_));
  }

 private:
  std::uint8_t get(std::int64_t x, std::int64_t y) const {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return 0;
    return px_[static_cast<std::size_t>(y) * w_ + static_cast<std::size_t>(x)];
  }

  // P2..P9 clockwise from north.
  std::array<std::uint8_t, 8> ring(std::int64_t x, std::int64_t y) const {
    return {get(x, y - 1),     get(x + 1, y - 1), get(x + 1, y), get(x + 1, y + 1),
            get(x, y + 1),     get(x - 1, y + 1), get(x - 1, y), get(x - 1, y - 1)};
  }

  bool deletable(std::int64_t x, std::int64_t y, int pass) const {
    const auto p = ring(x, y);
    int b = 0;
    int a = 0;
    for (int k = 0; k < 8; ++k) {
      b += p[k];
      a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
    }
    if (b < 2 || b > 6 || a != 1) return false;
    const auto p2 = p[0], p4 = p[2], p6 = p[4], p8 = p[6];
    if (pass == 0) return (p2 * p4 * p6) == 0 && (p4 * p6 * p8) == 0;
    return (p2 * p4 * p8) == 0 && (p2 * p6 * p8) == 0;
  }

  bool sub_iteration(int pass) {
    std::vector<std::size_t> doomed;
    for (std::int64_t y = 0; y < h_; ++y) {
      for (std::int64_t x = 0; x < w_; ++x) {
        const auto i = static_cast<std::size_t>(y) * w_ + static_cast<std::size_t>(x);
        if (px_[i] && deletable(x, y, pass)) doomed.push_back(i);
      }
    }
    if (doomed.empty()) return false;
    spare_vanishing_components(doomed);
    for (auto i : doomed) px_[i] = 0;
    return !doomed.empty();
  }

  void spare_vanishing_components(std::vector<std::size_t>& doomed) const {
    constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = px_.size();
    std::vector<std::uint32_t> label(n, kNone);
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
      if (!px_[start] || label[start] != kNone) continue;
      const auto id = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(0);
      label[start] = id;
      stack.push_back(start);
      while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        ++sizes[id];
        const auto x = static_cast<std::int64_t>(i % w_);
        const auto y = static_cast<std::int64_t>(i / w_);
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dx = -1; dx <= 1; ++dx) {
            if (!get(x + dx, y + dy)) continue;
            const auto j = static_cast<std::size_t>(y + dy) * w_ + static_cast<std::size_t>(x + dx);
            if (label[j] == kNone) {
              label[j] = id;
              stack.push_back(j);
            }
          }
        }
      }
    }
    std::vector<std::size_t> doomed_per(sizes.size(), 0);
    for (auto i : doomed) ++doomed_per[label[i]];
    std::vector<bool> spared(sizes.size(), false);
    std::vector<std::size_t> kept;
    kept.reserve(doomed.size());
    // doomed is in row-major order, so the first hit is the component's first pixel
    for (auto i : doomed) {
      const auto id = label[i];
      if (doomed_per[id] == sizes[id] && !spared[id]) {
        spared[id] = true;
        continue;
      }
      kept.push_back(i);
    }
    doomed.swap(kept);
  }

  std::int64_t h_;
  std::int64_t w_;
  std::vector<std::uint8_t> px_;
};

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) { return Thinning(mask).run(); }

ScribbleSet mask_to_scribbles(const BinaryMask& skeleton) {
  std::vector<ScribblePoint> points;
  for (std::uint32_t y = 0; y < skeleton.height(); ++y) {
    for (std::uint32_t x = 0; x < skeleton.width(); ++x) {
      if (skeleton.at(y, x)) points.push_back({x, y, kForegroundLabel});
    }
  }
  if (points.empty()) {
    throw Error(ErrorCode::kEmptySeeds, "mask_to_scribbles: skeleton is empty");
  }
  return ScribbleSet(skeleton.height(), skeleton.width(), std::move(points));
}

}  // namespace geoseg
