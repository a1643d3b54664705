#include <benchmark/benchmark.h>

#include <random>

#include "geoseg/distance.hpp"

namespace {

geoseg::ChannelStack make_stack(std::uint32_t size, std::uint32_t channels) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> data(std::size_t{size} * size * channels);
  for (auto& v : data) v = u(rng);
  return geoseg::ChannelStack(size, size, channels, std::move(data));
}

geoseg::ScribbleSet centre_seed(std::uint32_t size) {
  return geoseg::ScribbleSet(size, size, {{size / 2, size / 2, 1}});
}

void BM_GeodesicRaster(benchmark::State& state) {
  const auto size = static_cast<std::uint32_t>(state.range(0));
  const auto stack = make_stack(size, 16);
  const auto seeds = centre_seed(size);
  geoseg::DistanceParams params;
  params.max_iterations = 4;
  params.convergence_epsilon = 1e-12;
  params.threads = static_cast<std::uint32_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(geoseg::geodesic_raster(stack, seeds, params));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t{size} * size);
}
BENCHMARK(BM_GeodesicRaster)
    ->Args({128, 1})
    ->Args({512, 1})
    ->Args({512, 4})
    ->Unit(benchmark::kMillisecond);

void BM_GeodesicExact(benchmark::State& state) {
  const auto size = static_cast<std::uint32_t>(state.range(0));
  const auto stack = make_stack(size, 16);
  const auto seeds = centre_seed(size);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geoseg::geodesic_exact(stack, seeds));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t{size} * size);
}
BENCHMARK(BM_GeodesicExact)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_EuclideanEdt(benchmark::State& state) {
  const auto size = static_cast<std::uint32_t>(state.range(0));
  const auto seeds = centre_seed(size);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geoseg::euclidean_edt(seeds, size, size));
  }
}
BENCHMARK(BM_EuclideanEdt)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
