#include "geoseg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include "geoseg/error.hpp"
#include "geoseg/io.hpp"
#include "geoseg/preprocess.hpp"
#include "geoseg/skeleton.hpp"

namespace geoseg {

namespace fs = std::filesystem;

DistanceParams batch_distance_params() {
  DistanceParams params;
  params.max_iterations = 64;
  params.convergence_epsilon = 1e-6;
  return params;
}

std::vector<MethodSpec> default_methods(const DistanceParams& params) {
  return {
      {"features", MapSource::kFeatures, SolverKind::kGeodesicRaster, params},
      {"hyperspectral", MapSource::kHyperspectral, SolverKind::kGeodesicRaster, params},
      {"rgb", MapSource::kRgb, SolverKind::kGeodesicRaster, params},
      {"euclidean", MapSource::kNone, SolverKind::kEuclideanEdt, params},
  };
}

ImageVariants make_variants(ChannelStack cube, std::optional<ChannelStack> features) {
  if (features && (features->height() != cube.height() || features->width() != cube.width())) {
    throw Error(ErrorCode::kDimensionMismatch, "feature stack and cube differ in size");
  }
  if (!features) {
    features = pca_features(l1_normalize(cube), std::min<std::uint32_t>(3, cube.channels()));
  }
  auto rgb = rgb_reconstruct(cube);
  return ImageVariants{std::move(cube), std::move(*features), std::move(rgb)};
}

DistanceMap compute_method_map(const MethodSpec& method, const ImageVariants& variants,
                               const ScribbleSet& scribbles) {
  if (method.solver == SolverKind::kEuclideanEdt) {
    return euclidean_edt(scribbles, scribbles.height(), scribbles.width());
  }
  const ChannelStack* source = nullptr;
  switch (method.source) {
    case MapSource::kFeatures: source = &variants.features; break;
    case MapSource::kHyperspectral: source = &variants.hyperspectral; break;
    case MapSource::kRgb: source = &variants.rgb; break;
    case MapSource::kNone:
      throw Error(ErrorCode::kInvalidArgument,
                  "method '" + method.name + "': geodesic solver needs a channel source");
  }
  return method.solver == SolverKind::kGeodesicExact
             ? geodesic_exact(*source, scribbles, method.params)
             : geodesic_raster(*source, scribbles, method.params);
}

std::vector<MethodResult> evaluate_image(const ImageVariants& variants, const BinaryMask& gt,
                                         std::span<const MethodSpec> methods,
                                         std::uint32_t n_steps, const std::string& image_id) {
  const std::string context = image_id.empty() ? std::string() : "image " + image_id + ": ";
  std::set<std::string> names;
  for (const auto& m : methods) {
    if (!names.insert(m.name).second) {
      throw Error(ErrorCode::kInvalidArgument, context + "duplicate method name '" + m.name + "'");
    }
  }
  std::vector<MethodResult> results;
  if (methods.empty()) return results;
  if (gt.count() == 0) throw Error(ErrorCode::kInvalidArgument, context + "empty ground truth");

  try {
    const auto scribbles = mask_to_scribbles(skeletonize(gt));
    for (const auto& method : methods) {
      const auto start = std::chrono::steady_clock::now();
      const auto map = normalize_map(compute_method_map(method, variants, scribbles));
      auto curve = dice_sweep(map, gt, n_steps);
      const auto stop = std::chrono::steady_clock::now();
      results.push_back(
          {method.name, std::move(curve),
           std::chrono::duration<double, std::milli>(stop - start).count()});
    }
  } catch (const Error& e) {
    throw Error(e.code(), context + e.what());
  }
  return results;
}

std::vector<MethodAggregate> aggregate_rows(std::span<const ReportRow> rows,
                                            std::span<const MethodSpec> methods) {
  std::vector<MethodAggregate> out;
  for (const auto& method : methods) {
    std::vector<double> values;
    for (const auto& row : rows) {
      if (row.method == method.name) values.push_back(row.best_dice);
    }
    MethodAggregate agg{method.name, 0.0, 0.0, values.size()};
    if (!values.empty()) {
      double sum = 0.0;
      for (double v : values) sum += v;
      agg.mean_best_dice = sum / static_cast<double>(values.size());
      std::sort(values.begin(), values.end());
      const std::size_t mid = values.size() / 2;
      agg.median_best_dice =
          values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    }
    out.push_back(agg);
  }
  return out;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "image,method,best_dice,best_threshold,runtime_ms\n";
  for (const auto& row : report.rows) {
    out += row.image + ',' + row.method + ',' + format_float(row.best_dice) + ',' +
           format_float(row.best_threshold) + ',' + format_float(row.runtime_ms) + '\n';
  }
  return out;
}

std::string aggregates_to_csv(const EvalReport& report) {
  std::string out = "method,mean_best_dice,median_best_dice,count\n";
  for (const auto& agg : report.aggregates) {
    out += agg.method + ',' + format_float(agg.mean_best_dice) + ',' +
           format_float(agg.median_best_dice) + ',' + std::to_string(agg.count) + '\n';
  }
  return out;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open for writing: " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> dataset_ids(const fs::path& dir) {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (!ends_with(name, ".cst") || ends_with(name, ".features.cst")) continue;
    ids.push_back(name.substr(0, name.size() - 4));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct ImageOutcome {
  std::vector<MethodResult> results;
  std::optional<std::string> failure;
};

ImageOutcome evaluate_entry(const fs::path& dir, const std::string& id,
                            std::span<const MethodSpec> methods, std::uint32_t n_steps) {
  ImageOutcome outcome;
  try {
    auto cube = read_channel_stack(dir / (id + ".cst"));
    const auto gt = read_mask_pgm(dir / (id + ".gt.pgm"));
    if (gt.height() != cube.height() || gt.width() != cube.width()) {
      throw Error(ErrorCode::kDimensionMismatch, "ground truth and stack differ in size");
    }
    std::optional<ChannelStack> features;
    const auto features_path = dir / (id + ".features.cst");
    if (fs::exists(features_path)) features = read_channel_stack(features_path);
    const auto variants = make_variants(std::move(cube), std::move(features));
    outcome.results = evaluate_image(variants, gt, methods, n_steps, id);
  } catch (const Error& e) {
    outcome.failure = e.what();
  }
  return outcome;
}

}  // namespace

EvalReport run_batch(const fs::path& dataset_dir, std::span<const MethodSpec> methods,
                     const fs::path& output_dir, const BatchOptions& options) {
  if (!fs::is_directory(dataset_dir)) {
    throw Error(ErrorCode::kIoFailure, "dataset directory not found: " + dataset_dir.string());
  }
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + output_dir.string());

  const auto ids = dataset_ids(dataset_dir);
  std::vector<ImageOutcome> outcomes(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      outcomes[i] = evaluate_entry(dataset_dir, ids[i], methods, options.n_steps);
    }
  };
  {
    const std::uint32_t extra = std::max<std::uint32_t>(options.threads, 1) - 1;
    std::vector<std::jthread> pool;
    for (std::uint32_t t = 0; t < extra; ++t) pool.emplace_back(worker);
    worker();
  }

  EvalReport report;
  if (options.write_curves) fs::create_directories(output_dir / "curves");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (outcomes[i].failure) {
      std::cerr << "warning: skipping " << ids[i] << ": " << *outcomes[i].failure << '\n';
      report.skipped.push_back({ids[i], *outcomes[i].failure});
      continue;
    }
    for (const auto& result : outcomes[i].results) {
      report.rows.push_back({ids[i], result.method, result.curve.best_dice,
                             result.curve.best_threshold,
                             options.record_runtime ? result.runtime_ms : 0.0});
      if (options.write_curves) {
        write_text(output_dir / "curves" / (ids[i] + "__" + result.method + ".csv"),
                   dice_curve_to_csv(result.curve));
      }
    }
  }
  report.aggregates = aggregate_rows(report.rows, methods);

  write_text(output_dir / "report.csv", report_to_csv(report));
  write_text(output_dir / "aggregate.csv", aggregates_to_csv(report));
  std::string skipped = "image,reason\n";
  for (const auto& s : report.skipped) {
    std::string reason = s.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    skipped += s.image + ',' + reason + '\n';
  }
  write_text(output_dir / "skipped.csv", skipped);
  return report;
}

}  // namespace geoseg
