// geoseg: command-line front end for the scribble segmentation pipeline.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geoseg/distance.hpp"
#include "geoseg/error.hpp"
#include "geoseg/harness.hpp"
#include "geoseg/io.hpp"
#include "geoseg/preprocess.hpp"
#include "geoseg/segment.hpp"
#include "geoseg/service.hpp"
#include "geoseg/skeleton.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "HxW" -> (height, width)
std::pair<std::uint32_t, std::uint32_t> parse_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    const auto h = std::stoul(text.substr(0, x));
    const auto w = std::stoul(text.substr(x + 1));
    if (h == 0 || w == 0) throw std::invalid_argument(text);
    return {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(w)};
  } catch (const std::exception&) {
    throw UsageError("--size expects HxW, got '" + text + "'");
  }
}

geoseg::Service* g_service = nullptr;

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  CLI::App app{"Scribble-based geodesic segmentation of multi-channel images"};
  app.require_subcommand(1);

  // normalize
  std::string in_path, out_path;
  auto* normalize = app.add_subcommand("normalize", "L1-normalize every pixel spectrum");
  normalize->add_option("input", in_path, "input CST")->required();
  normalize->add_option("output", out_path, "output CST")->required();

  // features
  std::uint32_t k = 3;
  auto* features = app.add_subcommand("features", "PCA channel reduction to k features");
  features->add_option("--k", k, "number of output channels")->required();
  features->add_option("input", in_path)->required();
  features->add_option("output", out_path)->required();

  // rgb
  std::string weights_path;
  auto* rgb = app.add_subcommand("rgb", "reconstruct a 3-channel RGB stack");
  rgb->add_option("input", in_path)->required();
  rgb->add_option("output", out_path)->required();
  rgb->add_option("--weights", weights_path, "band weights JSON {\"r\":[],\"g\":[],\"b\":[]}");

  // geodesic
  std::string scribbles_path;
  geoseg::DistanceParams params;
  bool exact = false;
  auto* geodesic = app.add_subcommand("geodesic", "geodesic distance map from scribbles");
  geodesic->add_option("input", in_path)->required();
  geodesic->add_option("output", out_path)->required();
  geodesic->add_option("--scribbles", scribbles_path, "scribbles JSON")->required();
  geodesic->add_option("--lambda", params.lambda, "geodesic/spatial mix in [0,1]");
  geodesic->add_flag("--exact", exact, "use the exact shortest-path solver");
  geodesic->add_option("--iters", params.max_iterations, "raster sweep-pairs");
  geodesic->add_option("--epsilon", params.convergence_epsilon, "raster convergence threshold");
  geodesic->add_option("--connectivity", params.connectivity, "4 or 8");
  geodesic->add_option("--threads", params.threads, "raster sweep threads");

  // euclid
  std::string size_text;
  auto* euclid = app.add_subcommand("euclid", "exact Euclidean distance map from scribbles");
  euclid->add_option("output", out_path)->required();
  euclid->add_option("--scribbles", scribbles_path)->required();
  euclid->add_option("--size", size_text, "HxW")->required();

  // sweep
  std::string gt_path;
  std::uint32_t steps = geoseg::kDefaultSweepSteps;
  auto* sweep = app.add_subcommand("sweep", "Dice-vs-threshold curve of a distance map");
  sweep->add_option("map", in_path, "distance map CST")->required();
  sweep->add_option("output", out_path, "curve CSV (a .json summary is written beside it)")
      ->required();
  sweep->add_option("--gt", gt_path, "ground-truth PGM")->required();
  sweep->add_option("--steps", steps, "threshold samples");

  // skeletonize
  auto* skeleton = app.add_subcommand("skeletonize", "scribbles from a ground-truth skeleton");
  skeleton->add_option("input", in_path, "mask PGM")->required();
  skeleton->add_option("output", out_path, "scribbles JSON")->required();

  // eval
  std::string dataset_dir, output_dir;
  double eval_lambda = 1.0;
  std::uint32_t eval_iters = geoseg::batch_distance_params().max_iterations;
  geoseg::BatchOptions batch;
  bool no_timing = false;
  auto* eval = app.add_subcommand("eval", "batch evaluation of all four map methods");
  eval->add_option("dataset", dataset_dir)->required();
  eval->add_option("output", output_dir)->required();
  eval->add_option("--lambda", eval_lambda);
  eval->add_option("--iters", eval_iters, "max raster sweep-pairs");
  eval->add_option("--steps", batch.n_steps);
  eval->add_option("--threads", batch.threads, "images evaluated in parallel");
  eval->add_flag("--no-timing", no_timing, "write runtime_ms = 0 for reproducible reports");

  // phantom
  std::uint32_t count = 1;
  double noise = 0.3;
  std::uint64_t seed = 0;
  std::string phantom_size = "128x128";
  std::uint32_t channels = 8;
  auto* phantom = app.add_subcommand("phantom", "write a synthetic phantom dataset");
  phantom->add_option("--out", output_dir)->required();
  phantom->add_option("--count", count)->required();
  phantom->add_option("--noise", noise)->required();
  phantom->add_option("--seed", seed)->required();
  phantom->add_option("--size", phantom_size, "HxW");
  phantom->add_option("--channels", channels);

  // serve
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string static_dir;
  double ttl_minutes = 30.0;
  auto* serve = app.add_subcommand("serve", "run the interactive HTTP session service");
  serve->add_option("--port", port)->required();
  serve->add_option("--data", static_dir, "static UI directory served at /");
  serve->add_option("--host", host);
  serve->add_option("--ttl-minutes", ttl_minutes, "idle session lifetime");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*normalize) {
      geoseg::write_channel_stack(geoseg::l1_normalize(geoseg::read_channel_stack(in_path)),
                                  out_path);
    } else if (*features) {
      geoseg::write_channel_stack(geoseg::pca_features(geoseg::read_channel_stack(in_path), k),
                                  out_path);
    } else if (*rgb) {
      const auto stack = geoseg::read_channel_stack(in_path);
      const auto weights = weights_path.empty()
                               ? geoseg::BandWeights::band_thirds(stack.channels())
                               : geoseg::read_band_weights_json(weights_path);
      geoseg::write_channel_stack(geoseg::rgb_reconstruct(stack, weights), out_path);
    } else if (*geodesic) {
      const auto stack = geoseg::read_channel_stack(in_path);
      const auto seeds =
          geoseg::read_scribbles_json(scribbles_path, stack.height(), stack.width());
      const auto map = exact ? geoseg::geodesic_exact(stack, seeds, params)
                             : geoseg::geodesic_raster(stack, seeds, params);
      geoseg::write_distance_map(map, out_path);
    } else if (*euclid) {
      const auto [h, w] = parse_size(size_text);
      const auto seeds = geoseg::read_scribbles_json(scribbles_path, h, w);
      geoseg::write_distance_map(geoseg::euclidean_edt(seeds, h, w), out_path);
    } else if (*sweep) {
      const auto map = geoseg::normalize_map(geoseg::read_distance_map(in_path));
      const auto curve = geoseg::dice_sweep(map, geoseg::read_mask_pgm(gt_path), steps);
      geoseg::write_dice_curve(curve, out_path);
    } else if (*skeleton) {
      const auto mask = geoseg::read_mask_pgm(in_path);
      geoseg::write_scribbles_json(geoseg::mask_to_scribbles(geoseg::skeletonize(mask)),
                                   out_path);
    } else if (*eval) {
      auto eval_params = geoseg::batch_distance_params();
      eval_params.lambda = eval_lambda;
      eval_params.max_iterations = eval_iters;
      eval_params.validate();
      batch.record_runtime = !no_timing;
      const auto methods = geoseg::default_methods(eval_params);
      const auto report = geoseg::run_batch(dataset_dir, methods, output_dir, batch);
      for (const auto& agg : report.aggregates) {
        std::cerr << agg.method << ": mean best dice " << agg.mean_best_dice << " over "
                  << agg.count << " images\n";
      }
      out_path = (fs::path(output_dir) / "report.csv").string();
    } else if (*phantom) {
      const auto [h, w] = parse_size(phantom_size);
      geoseg::write_phantom_dataset(output_dir, count, noise, seed, h, w, channels);
      out_path = output_dir;
    } else if (*serve) {
      geoseg::ServiceConfig config;
      config.session_ttl = std::chrono::milliseconds(static_cast<long long>(ttl_minutes * 60000.0));
      if (!static_dir.empty()) config.static_root = static_dir;
      geoseg::Service service(config);
      g_service = &service;
      std::signal(SIGINT, [](int) {
        if (g_service) g_service->stop();
      });
      std::cerr << "listening on http://" << host << ":" << port << '\n';
      if (!service.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << '\n';
        return kExitData;
      }
      g_service = nullptr;
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const geoseg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  std::cout << out_path << '\n';
  return 0;
}
