#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geoseg/tensor.hpp"

namespace geoseg {

/// Per-pixel spectrum divided by its L1 norm. Zero spectra stay zero.
ChannelStack l1_normalize(const ChannelStack& stack);

/// Projects mean-centred spectra onto the top-k eigenvectors of the channel
/// covariance (descending eigenvalue). Each eigenvector is signed so that its
/// largest-magnitude entry is positive.
ChannelStack pca_features(const ChannelStack& stack, std::uint32_t k);

/// C -> 3 band weights. Each vector is non-negative and sums to 1.
struct BandWeights {
  std::vector<float> r;
  std::vector<float> g;
  std::vector<float> b;

  std::size_t bands() const noexcept { return r.size(); }
  void validate() const;

  /// Equal-width contiguous thirds, assuming bands are ordered from short to
  /// long wavelength: first third -> B, middle -> G, last third -> R.
  static BandWeights band_thirds(std::uint32_t channels);
};

BandWeights parse_band_weights_json(const std::string& text);
BandWeights read_band_weights_json(const std::filesystem::path& path);
std::string band_weights_to_json(const BandWeights& weights);

ChannelStack rgb_reconstruct(const ChannelStack& stack, const BandWeights& weights);
inline ChannelStack rgb_reconstruct(const ChannelStack& stack) {
  return rgb_reconstruct(stack, BandWeights::band_thirds(stack.channels()));
}

}  // namespace geoseg
