#include <benchmark/benchmark.h>

#include <random>

#include "geoseg/segment.hpp"
#include "geoseg/skeleton.hpp"

namespace {

constexpr std::uint32_t kSize = 512;

geoseg::DistanceMap random_map() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> data(std::size_t{kSize} * kSize);
  for (auto& v : data) v = u(rng);
  return geoseg::normalize_map(geoseg::DistanceMap(kSize, kSize, std::move(data)));
}

geoseg::BinaryMask disc_mask() {
  std::vector<std::uint8_t> data(std::size_t{kSize} * kSize);
  const double r = kSize / 3.0, c = kSize / 2.0;
  for (std::uint32_t y = 0; y < kSize; ++y)
    for (std::uint32_t x = 0; x < kSize; ++x)
      data[std::size_t{y} * kSize + x] = (x - c) * (x - c) + (y - c) * (y - c) <= r * r;
  return geoseg::BinaryMask(kSize, kSize, std::move(data));
}

void BM_Threshold(benchmark::State& state) {
  const auto map = random_map();
  for (auto _ : state) benchmark::DoNotOptimize(geoseg::threshold_segment(map, 0.4));
}
BENCHMARK(BM_Threshold)->Unit(benchmark::kMicrosecond);

void BM_DiceSweep(benchmark::State& state) {
  const auto map = random_map();
  const auto gt = disc_mask();
  for (auto _ : state) benchmark::DoNotOptimize(geoseg::dice_sweep(map, gt, 256));
}
BENCHMARK(BM_DiceSweep)->Unit(benchmark::kMillisecond);

void BM_DiceSweepDistinct(benchmark::State& state) {
  const auto map = random_map();
  const auto gt = disc_mask();
  for (auto _ : state) benchmark::DoNotOptimize(geoseg::dice_sweep_distinct(map, gt));
}
BENCHMARK(BM_DiceSweepDistinct)->Unit(benchmark::kMillisecond);

void BM_Skeletonize(benchmark::State& state) {
  const auto mask = disc_mask();
  for (auto _ : state) benchmark::DoNotOptimize(geoseg::skeletonize(mask));
}
BENCHMARK(BM_Skeletonize)->Unit(benchmark::kMillisecond);

}  // namespace
