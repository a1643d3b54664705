#include <algorithm>
#include <barrier>
#include <limits>
#include <thread>

#include "edge_costs.hpp"
#include "geoseg/error.hpp"

namespace geoseg {

namespace {

constexpr double kUnreached = std::numeric_limits<double>::infinity();

inline double improvement(double before, double after) {
  return after < before ? before - after : 0.0;
}

}  // namespace

struct RasterGeodesicSolver::Impl {
  Impl(const ChannelStack& stack, const ScribbleSet& seeds, const DistanceParams& p)
      : params(p), costs(stack, p), dist(stack.pixel_count(), kUnreached) {
    for (auto s : seeds.foreground_indices()) dist[s] = 0.0;
  }

  using Dir = detail::EdgeCosts::Dir;

  // Causal half-neighbourhood of a forward sweep: W, N, NW, NE.
  double relax_forward(std::uint32_t x, std::uint32_t y) {
    const std::uint32_t w = costs.width();
    const std::size_t i = costs.index(x, y);
    const double before = dist[i];
    double best = before;
    if (x > 0) best = std::min(best, dist[i - 1] + costs.at(Dir::kEast, i - 1));
    if (y > 0) {
      best = std::min(best, dist[i - w] + costs.at(Dir::kSouth, i - w));
      if (costs.diagonal()) {
        if (x > 0) best = std::min(best, dist[i - w - 1] + costs.at(Dir::kSouthEast, i - w - 1));
        if (x + 1 < w) best = std::min(best, dist[i - w + 1] + costs.at(Dir::kSouthWest, i - w + 1));
      }
    }
    dist[i] = best;
    return improvement(before, best);
  }

  // Mirror image for the backward sweep: E, S, SE, SW.
  double relax_backward(std::uint32_t x, std::uint32_t y) {
    const std::uint32_t w = costs.width();
    const std::size_t i = costs.index(x, y);
    const double before = dist[i];
    double best = before;
    if (x + 1 < w) best = std::min(best, dist[i + 1] + costs.at(Dir::kEast, i));
    if (y + 1 < costs.height()) {
      best = std::min(best, dist[i + w] + costs.at(Dir::kSouth, i));
      if (costs.diagonal()) {
        if (x + 1 < w) best = std::min(best, dist[i + w + 1] + costs.at(Dir::kSouthEast, i));
        if (x > 0) best = std::min(best, dist[i + w - 1] + costs.at(Dir::kSouthWest, i));
      }
    }
    dist[i] = best;
    return improvement(before, best);
  }

  double sweep_sequential(bool forward) {
    const std::uint32_t w = costs.width();
    const std::uint32_t h = costs.height();
    double change = 0.0;
    if (forward) {
      for (std::uint32_t y = 0; y < h; ++y)
        for (std::uint32_t x = 0; x < w; ++x) change = std::max(change, relax_forward(x, y));
    } else {
      for (std::uint32_t y = h; y-- > 0;)
        for (std::uint32_t x = w; x-- > 0;) change = std::max(change, relax_backward(x, y));
    }
    return change;
  }

  // Pixels on the wavefront x + 2y = t depend only on pixels with smaller t
  // (forward) or larger t (backward), so each wavefront can be split across
  // threads while every pixel still reads exactly what the sequential sweep reads.
  double sweep_wavefront(bool forward, std::uint32_t thread_count) {
    const std::int64_t w = costs.width();
    const std::int64_t h = costs.height();
    const std::int64_t last_wave = (w - 1) + 2 * (h - 1);
    std::vector<double> partial(thread_count, 0.0);
    std::barrier sync(static_cast<std::ptrdiff_t>(thread_count));

    auto worker = [&](std::uint32_t rank) {
      double local = 0.0;
      for (std::int64_t step = 0; step <= last_wave; ++step) {
        const std::int64_t t = forward ? step : last_wave - step;
        const std::int64_t y_lo = std::max<std::int64_t>(0, (t - (w - 1) + 1) / 2);
        const std::int64_t y_hi = std::min<std::int64_t>(h - 1, t / 2);
        for (std::int64_t y = y_lo + rank; y <= y_hi; y += thread_count) {
          const auto x = static_cast<std::uint32_t>(t - 2 * y);
          const auto yy = static_cast<std::uint32_t>(y);
          local = std::max(local, forward ? relax_forward(x, yy) : relax_backward(x, yy));
        }
        sync.arrive_and_wait();
      }
      partial[rank] = local;
    };

    {
      std::vector<std::jthread> pool;
      pool.reserve(thread_count - 1);
      for (std::uint32_t r = 1; r < thread_count; ++r) pool.emplace_back(worker, r);
      worker(0);
    }
    return *std::max_element(partial.begin(), partial.end());
  }

  double sweep(bool forward) {
    if (params.threads <= 1) return sweep_sequential(forward);
    return sweep_wavefront(forward, params.threads);
  }

  DistanceParams params;
  detail::EdgeCosts costs;
  std::vector<double> dist;
  std::uint32_t pairs = 0;
};

RasterGeodesicSolver::RasterGeodesicSolver(const ChannelStack& stack, const ScribbleSet& seeds,
                                           const DistanceParams& params) {
  params.validate();
  detail::require_matching(stack, seeds);
  impl_ = std::make_unique<Impl>(stack, seeds, params);
}

RasterGeodesicSolver::~RasterGeodesicSolver() = default;
RasterGeodesicSolver::RasterGeodesicSolver(RasterGeodesicSolver&&) noexcept = default;
RasterGeodesicSolver& RasterGeodesicSolver::operator=(RasterGeodesicSolver&&) noexcept = default;

double RasterGeodesicSolver::sweep_pair() {
  const double forward = impl_->sweep(true);
  const double backward = impl_->sweep(false);
  ++impl_->pairs;
  return std::max(forward, backward);
}

std::uint32_t RasterGeodesicSolver::run() {
  std::uint32_t ran = 0;
  while (impl_->pairs < impl_->params.max_iterations) {
    ++ran;
    if (sweep_pair() <= impl_->params.convergence_epsilon) break;
  }
  return ran;
}

std::uint32_t RasterGeodesicSolver::sweep_pairs_done() const noexcept { return impl_->pairs; }

std::span<const double> RasterGeodesicSolver::distances() const noexcept { return impl_->dist; }

DistanceMap RasterGeodesicSolver::result() const {
  return detail::to_distance_map(impl_->costs.height(), impl_->costs.width(), impl_->dist);
}

DistanceMap geodesic_raster(const ChannelStack& stack, const ScribbleSet& seeds,
                            const DistanceParams& params) {
  RasterGeodesicSolver solver(stack, seeds, params);
  solver.run();
  return solver.result();
}

}  // namespace geoseg
