#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoseg/distance.hpp"
#include "geoseg/segment.hpp"
#include "geoseg/tensor.hpp"

namespace geoseg {

enum class MapSource { kFeatures, kHyperspectral, kRgb, kNone };
enum class SolverKind { kGeodesicRaster, kGeodesicExact, kEuclideanEdt };

struct MethodSpec {
  std::string name;
  MapSource source = MapSource::kFeatures;
  SolverKind solver = SolverKind::kGeodesicRaster;
  DistanceParams params;
};

/// Raster solver run towards convergence: lambda 1, 8-connectivity, up to 64
/// sweep-pairs, epsilon 1e-6.
DistanceParams batch_distance_params();

/// features / hyperspectral / rgb geodesic maps plus the euclidean baseline.
std::vector<MethodSpec> default_methods(const DistanceParams& params = batch_distance_params());

/// The channel stacks a method can draw from.
struct ImageVariants {
  ChannelStack hyperspectral;
  ChannelStack features;
  ChannelStack rgb;
};

/// Builds every variant from a cube. Without precomputed features, uses
/// pca_features(l1_normalize(cube), min(3, C)).
ImageVariants make_variants(ChannelStack cube, std::optional<ChannelStack> features = std::nullopt);

/// Raw (unnormalized) distance map for one method.
DistanceMap compute_method_map(const MethodSpec& method, const ImageVariants& variants,
                               const ScribbleSet& scribbles);

struct MethodResult {
  std::string method;
  DiceCurve curve;
  double runtime_ms = 0.0;
};

/// skeletonize(gt) -> scribbles -> per-method map -> normalize -> dice_sweep.
std::vector<MethodResult> evaluate_image(const ImageVariants& variants, const BinaryMask& gt,
                                         std::span<const MethodSpec> methods,
                                         std::uint32_t n_steps = kDefaultSweepSteps,
                                         const std::string& image_id = {});

struct ReportRow {
  std::string image;
  std::string method;
  double best_dice = 0.0;
  double best_threshold = 0.0;
  double runtime_ms = 0.0;
};

struct MethodAggregate {
  std::string method;
  double mean_best_dice = 0.0;
  double median_best_dice = 0.0;
  std::size_t count = 0;
};

struct SkippedImage {
  std::string image;
  std::string reason;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  std::vector<MethodAggregate> aggregates;
  std::vector<SkippedImage> skipped;
};

std::vector<MethodAggregate> aggregate_rows(std::span<const ReportRow> rows,
                                            std::span<const MethodSpec> methods);

struct BatchOptions {
  std::uint32_t n_steps = kDefaultSweepSteps;
  // Wall-clock timings are not reproducible; false writes runtime_ms = 0.
  bool record_runtime = true;
  bool write_curves = true;
  std::uint32_t threads = 1;
};

/// Evaluates every <id>.cst / <id>.gt.pgm pair (plus optional <id>.features.cst)
/// under `dataset_dir`. Writes report.csv, aggregate.csv, skipped.csv and
/// curves/<id>__<method>.csv into `output_dir`. Unreadable pairs are skipped
/// with a warning on stderr and listed in the report.
EvalReport run_batch(const std::filesystem::path& dataset_dir, std::span<const MethodSpec> methods,
                     const std::filesystem::path& output_dir, const BatchOptions& options = {});

std::string report_to_csv(const EvalReport& report);
std::string aggregates_to_csv(const EvalReport& report);

struct Phantom {
  ChannelStack hyperspectral;
  ChannelStack features;
  BinaryMask gt;
};

/// Axis-aligned filled ellipse with one spectral signature inside and another
/// outside, plus i.i.d. Gaussian noise (noise_sigma for the cube, a quarter of
/// it for the feature stack). Deterministic in `seed`.
Phantom make_phantom(std::uint32_t height, std::uint32_t width, std::uint32_t channels,
                     double noise_sigma, std::uint64_t seed);

/// Writes phantom_NNN.cst, phantom_NNN.features.cst and phantom_NNN.gt.pgm for
/// seeds seed, seed + 1, ...
void write_phantom_dataset(const std::filesystem::path& dir, std::uint32_t count,
                           double noise_sigma, std::uint64_t seed, std::uint32_t height = 128,
                           std::uint32_t width = 128, std::uint32_t channels = 8);

}  // namespace geoseg
