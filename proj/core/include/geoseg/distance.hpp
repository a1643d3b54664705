#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "geoseg/tensor.hpp"

namespace geoseg {

// Edge cost between adjacent pixels i, j:
//   sqrt((1 - lambda) * d_spatial^2 + lambda * ||I(i) - I(j)||^2)
// with d_spatial = 1 (axial) or sqrt(2) (diagonal). lambda = 1 is the pure
// image-gradient geodesic; lambda = 0 is the spatial chamfer distance.
struct DistanceParams {
  double lambda = 1.0;
  int connectivity = 8;
  std::uint32_t max_iterations = 4;  // sweep-pairs
  double convergence_epsilon = 1e-6;
  // Raster solver schedule: 1 runs the plain sequential sweep, N > 1 runs each
  // sweep as anti-diagonal wavefronts on N threads. Results are bitwise equal.
  std::uint32_t threads = 1;

  void validate() const;
};

/// Label-setting (Dijkstra) shortest paths on the pixel graph. Exact; used as
/// the reference for the raster solver.
DistanceMap geodesic_exact(const ChannelStack& stack, const ScribbleSet& seeds,
                           const DistanceParams& params = {});

/// Iterated forward/backward raster-scan solver. Runs until a sweep-pair
/// changes no pixel by more than convergence_epsilon, or max_iterations.
DistanceMap geodesic_raster(const ChannelStack& stack, const ScribbleSet& seeds,
                            const DistanceParams& params = {});

/// Exact Euclidean distance to the nearest foreground seed (separable squared
/// EDT followed by a square root).
DistanceMap euclidean_edt(const ScribbleSet& seeds, std::uint32_t height, std::uint32_t width);

/// Step-wise access to the raster solver, for callers that want to observe
/// the per-sweep values. Keeps a reference to `stack`, which must outlive it.
class RasterGeodesicSolver {
 public:
  RasterGeodesicSolver(const ChannelStack& stack, const ScribbleSet& seeds,
                       const DistanceParams& params);
  ~RasterGeodesicSolver();
  RasterGeodesicSolver(RasterGeodesicSolver&&) noexcept;
  RasterGeodesicSolver& operator=(RasterGeodesicSolver&&) noexcept;

  /// One forward then one backward sweep. Returns the largest per-pixel change
  /// (+inf while some pixel is still unreached).
  double sweep_pair();

  /// Sweeps until converged or max_iterations pairs. Returns pairs run.
  std::uint32_t run();

  std::uint32_t sweep_pairs_done() const noexcept;
  std::span<const double> distances() const noexcept;
  DistanceMap result() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geoseg
