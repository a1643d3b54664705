#include <cmath>
#include <limits>

#include "geoseg/distance.hpp"
#include "geoseg/error.hpp"

namespace geoseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D lower envelope of parabolas (Felzenszwalb & Huttenlocher). Infinite
// samples are not sites; a line with no finite sample stays infinite.
void squared_edt_1d(const std::vector<double>& f, std::vector<double>& out,
                    std::vector<std::int64_t>& sites, std::vector<double>& bounds) {
  const auto n = static_cast<std::int64_t>(f.size());
  sites.clear();
  bounds.clear();
  for (std::int64_t q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    const double fq = f[q] + static_cast<double>(q * q);
    double s = -kInf;
    while (!sites.empty()) {
      const std::int64_t p = sites.back();
      s = (fq - (f[p] + static_cast<double>(p * p))) / (2.0 * static_cast<double>(q - p));
      if (s > bounds.back()) break;
      sites.pop_back();
      bounds.pop_back();
      s = -kInf;
    }
    sites.push_back(q);
    bounds.push_back(s);
  }
  if (sites.empty()) {
    std::fill(out.begin(), out.end(), kInf);
    return;
  }
  std::size_t k = 0;
  for (std::int64_t q = 0; q < n; ++q) {
    while (k + 1 < sites.size() && bounds[k + 1] < static_cast<double>(q)) ++k;
    const double d = static_cast<double>(q - sites[k]);
    out[q] = d * d + f[sites[k]];
  }
}

}  // namespace

DistanceMap euclidean_edt(const ScribbleSet& seeds, std::uint32_t height, std::uint32_t width) {
  if (seeds.height() != height || seeds.width() != width) {
    throw Error(ErrorCode::kDimensionMismatch, "euclidean_edt: scribbles drawn on another raster");
  }
  const std::size_t n = static_cast<std::size_t>(height) * width;
  std::vector<double> grid(n, kInf);
  for (auto s : seeds.foreground_indices()) grid[s] = 0.0;

  std::vector<std::int64_t> sites;
  std::vector<double> bounds;

  std::vector<double> column(height), column_out(height);
  for (std::uint32_t x = 0; x < width; ++x) {
    for (std::uint32_t y = 0; y < height; ++y) column[y] = grid[std::size_t{y} * width + x];
    squared_edt_1d(column, column_out, sites, bounds);
    for (std::uint32_t y = 0; y < height; ++y) grid[std::size_t{y} * width + x] = column_out[y];
  }

  std::vector<double> row(width), row_out(width);
  std::vector<float> out(n);
  for (std::uint32_t y = 0; y < height; ++y) {
    const std::size_t base = std::size_t{y} * width;
    std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(base), width, row.begin());
    squared_edt_1d(row, row_out, sites, bounds);
    for (std::uint32_t x = 0; x < width; ++x) out[base + x] = static_cast<float>(std::sqrt(row_out[x]));
  }
  return DistanceMap(height, width, std::move(out));
}

}  // namespace geoseg
