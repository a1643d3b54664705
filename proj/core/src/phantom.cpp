#include <cstdio>
#include <random>

#include "geoseg/error.hpp"
#include "geoseg/harness.hpp"
#include "geoseg/io.hpp"

namespace geoseg {

namespace {

// Smooth spectra over the normalized band position u in [0, 1].
float inside_signature(double u) { return static_cast<float>(1.32 - 0.30 * u); }
float outside_signature(double u) { return static_cast<float>(0.05 + 0.20 * u); }

}  // namespace

Phantom make_phantom(std::uint32_t height, std::uint32_t width, std::uint32_t channels,
                     double noise_sigma, std::uint64_t seed) {
  if (height < 16 || width < 16 || channels < 1) {
    throw Error(ErrorCode::kInvalidArgument, "make_phantom: need height, width >= 16 and channels >= 1");
  }
  if (!(noise_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "make_phantom: noise_sigma must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::uniform_real_distribution<double> short_axis(0.12, 0.2);
  std::uniform_real_distribution<double> long_axis(0.3, 0.4);
  std::bernoulli_distribution tall(0.5);
  const double cy = height * (0.5 + jitter(rng));
  const double cx = width * (0.5 + jitter(rng));
  const bool vertical = tall(rng);
  const double ry = height * (vertical ? long_axis(rng) : short_axis(rng));
  const double rx = width * (vertical ? short_axis(rng) : long_axis(rng));

  const std::size_t n = static_cast<std::size_t>(height) * width;
  std::vector<std::uint8_t> gt(n);
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const double dy = (y + 0.5 - cy) / ry;
      const double dx = (x + 0.5 - cx) / rx;
      gt[std::size_t{y} * width + x] = (dx * dx + dy * dy) <= 1.0 ? 1 : 0;
    }
  }

  std::vector<float> inside(channels), outside(channels);
  for (std::uint32_t c = 0; c < channels; ++c) {
    const double u = channels > 1 ? static_cast<double>(c) / (channels - 1) : 0.0;
    inside[c] = inside_signature(u);
    outside[c] = outside_signature(u);
  }

  auto render = [&](double sigma) {
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<float> data(n * channels);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& signature = gt[i] ? inside : outside;
      for (std::uint32_t c = 0; c < channels; ++c) {
        const double eps = sigma > 0.0 ? sigma * noise(rng) : 0.0;
        data[i * channels + c] = static_cast<float>(signature[c] + eps);
      }
    }
    return ChannelStack(height, width, channels, std::move(data));
  };
  auto hyperspectral = render(noise_sigma);
  auto features = render(noise_sigma / 4.0);
  return Phantom{std::move(hyperspectral), std::move(features),
                 BinaryMask(height, width, std::move(gt))};
}

void write_phantom_dataset(const std::filesystem::path& dir, std::uint32_t count,
                           double noise_sigma, std::uint64_t seed, std::uint32_t height,
                           std::uint32_t width, std::uint32_t channels) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string() + ": " + ec.message());
  for (std::uint32_t i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "phantom_%03u", i);
    const auto phantom = make_phantom(height, width, channels, noise_sigma, seed + i);
    write_channel_stack(phantom.hyperspectral, dir / (std::string(id) + ".cst"));
    write_channel_stack(phantom.features, dir / (std::string(id) + ".features.cst"));
    write_mask_pgm(phantom.gt, dir / (std::string(id) + ".gt.pgm"));
  }
}

}  // namespace geoseg
