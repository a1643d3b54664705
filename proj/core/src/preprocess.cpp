#include "geoseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "geoseg/error.hpp"

namespace geoseg {

ChannelStack l1_normalize(const ChannelStack& stack) {
  const std::uint32_t channels = stack.channels();
  std::vector<float> out(stack.data().begin(), stack.data().end());
  for (std::size_t i = 0; i < stack.pixel_count(); ++i) {
    const auto spectrum = stack.pixel(i);
    double norm = 0.0;
    for (float v : spectrum) norm += std::abs(static_cast<double>(v));
    if (norm == 0.0) continue;
    for (std::uint32_t c = 0; c < channels; ++c) {
      out[i * channels + c] = static_cast<float>(spectrum[c] / norm);
    }
  }
  return ChannelStack(stack.height(), stack.width(), channels, std::move(out));
}

ChannelStack pca_features(const ChannelStack& stack, std::uint32_t k) {
  const std::uint32_t channels = stack.channels();
  if (k < 1 || k > channels) {
    throw Error(ErrorCode::kInvalidArgument,
                "pca_features: k must be in [1, " + std::to_string(channels) + "]");
  }
  const auto n = static_cast<Eigen::Index>(stack.pixel_count());
  Eigen::MatrixXd spectra(n, channels);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto px = stack.pixel(static_cast<std::size_t>(i));
    for (std::uint32_t c = 0; c < channels; ++c) spectra(i, c) = px[c];
  }
  const Eigen::RowVectorXd mean = spectra.colwise().mean();
  spectra.rowwise() -= mean;
  const Eigen::MatrixXd covariance =
      (spectra.transpose() * spectra) / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "pca_features: covariance eigen-solve failed");
  }
  // Eigen returns ascending eigenvalues; take the last k columns in reverse.
  Eigen::MatrixXd basis(channels, k);
  for (std::uint32_t j = 0; j < k; ++j) {
    Eigen::VectorXd v = solver.eigenvectors().col(channels - 1 - j);
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    if (v(largest) < 0.0) v = -v;
    basis.col(j) = v;
  }
  const Eigen::MatrixXd projected = spectra * basis;

  std::vector<float> out(static_cast<std::size_t>(n) * k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < k; ++j) {
      out[static_cast<std::size_t>(i) * k + j] = static_cast<float>(projected(i, j));
    }
  }
  return ChannelStack(stack.height(), stack.width(), k, std::move(out));
}

void BandWeights::validate() const {
  if (r.empty() || r.size() != g.size() || r.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "BandWeights: r, g and b must be non-empty and equally sized");
  }
  for (const auto* w : {&r, &g, &b}) {
    if (std::any_of(w->begin(), w->end(), [](float x) { return !(x >= 0.0f) || !std::isfinite(x); })) {
      throw Error(ErrorCode::kInvalidArgument, "BandWeights: weights must be finite and >= 0");
    }
    const double sum = std::accumulate(w->begin(), w->end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-5) {
      throw Error(ErrorCode::kInvalidArgument, "BandWeights: weights must sum to 1");
    }
  }
}

BandWeights BandWeights::band_thirds(std::uint32_t channels) {
  if (channels == 0) throw Error(ErrorCode::kInvalidArgument, "BandWeights: zero channels");
  // third 0 (short) -> b, 1 -> g, 2 (long) -> r; every third gets >= 1 band.
  auto third = [channels](std::uint32_t t) {
    std::vector<float> w(channels, 0.0f);
    std::uint32_t begin = t * channels / 3;
    std::uint32_t end = (t + 1) * channels / 3;
    begin = std::min(begin, channels - 1);
    end = std::max(end, begin + 1);
    for (std::uint32_t c = begin; c < end; ++c) w[c] = 1.0f / static_cast<float>(end - begin);
    return w;
  };
  return BandWeights{third(2), third(1), third(0)};
}

BandWeights parse_band_weights_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    BandWeights w{doc.at("r").get<std::vector<float>>(), doc.at("g").get<std::vector<float>>(),
                  doc.at("b").get<std::vector<float>>()};
    w.validate();
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("band weights: ") + e.what());
  }
}

BandWeights read_band_weights_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_band_weights_json(buffer.str());
}

std::string band_weights_to_json(const BandWeights& weights) {
  return nlohmann::json{{"r", weights.r}, {"g", weights.g}, {"b", weights.b}}.dump();
}

ChannelStack rgb_reconstruct(const ChannelStack& stack, const BandWeights& weights) {
  weights.validate();
  if (weights.bands() != stack.channels()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "rgb_reconstruct: weights cover " + std::to_string(weights.bands()) +
                    " bands, stack has " + std::to_string(stack.channels()));
  }
  std::vector<float> out(stack.pixel_count() * 3);
  const std::vector<float>* rows[3] = {&weights.r, &weights.g, &weights.b};
  // Dividing by the float weight sum keeps the output a true convex combination.
  double sums[3];
  for (int o = 0; o < 3; ++o) sums[o] = std::accumulate(rows[o]->begin(), rows[o]->end(), 0.0);
  for (std::size_t i = 0; i < stack.pixel_count(); ++i) {
    const auto px = stack.pixel(i);
    for (int o = 0; o < 3; ++o) {
      double acc = 0.0;
      for (std::size_t c = 0; c < px.size(); ++c) acc += static_cast<double>((*rows[o])[c]) * px[c];
      out[i * 3 + o] = static_cast<float>(acc / sums[o]);
    }
  }
  return ChannelStack(stack.height(), stack.width(), 3, std::move(out));
}

}  // namespace geoseg
