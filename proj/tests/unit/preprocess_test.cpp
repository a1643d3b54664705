#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "geoseg/error.hpp"
#include "geoseg/preprocess.hpp"
#include "oracles.hpp"

namespace geoseg {
namespace {

TEST(L1Normalize, ScalesToUnitSumAndKeepsZeroSpectra) {
  const ChannelStack s(1, 2, 3, {2, 2, 0, 0, 0, 0});
  const auto n = l1_normalize(s);
  EXPECT_FLOAT_EQ(n.at(0, 0, 0), 0.5f);
  EXPECT_FLOAT_EQ(n.at(0, 0, 1), 0.5f);
  EXPECT_FLOAT_EQ(n.at(0, 0, 2), 0.0f);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(n.at(0, 1, c), 0.0f);
}

TEST(L1Normalize, NegativeValuesUseAbsoluteSum) {
  const auto n = l1_normalize(ChannelStack(1, 1, 2, {-1, 3}));
  EXPECT_FLOAT_EQ(n.at(0, 0, 0), -0.25f);
  EXPECT_FLOAT_EQ(n.at(0, 0, 1), 0.75f);
}

TEST(L1Normalize, IdempotentOnRandomStacks) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto once = l1_normalize(oracle::random_stack(rng, 6, 5, 7, -1.0f, 2.0f));
    const auto twice = l1_normalize(once);
    for (std::size_t i = 0; i < once.data().size(); ++i) {
      ASSERT_NEAR(once.data()[i], twice.data()[i], 1e-6);
    }
    for (std::size_t p = 0; p < once.pixel_count(); ++p) {
      double sum = 0;
      for (float v : once.pixel(p)) sum += std::abs(v);
      ASSERT_NEAR(sum, 1.0, 1e-5);
    }
  }
}

// Independent PCA: covariance by hand, Jacobi eigenvectors, same sign rule.
TEST(Pca, MatchesJacobiOracle) {
  std::mt19937_64 rng(11);
  const std::uint32_t h = 8, w = 8, c = 6, k = 3;
  const auto stack = oracle::random_stack(rng, h, w, c);
  const auto got = pca_features(stack, k);
  ASSERT_EQ(got.channels(), k);

  const std::size_t n = stack.pixel_count();
  std::vector<double> mean(c, 0.0), cov(c * c, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::uint32_t a = 0; a < c; ++a) mean[a] += stack.pixel(p)[a];
  for (auto& m : mean) m /= double(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::uint32_t a = 0; a < c; ++a)
      for (std::uint32_t b = 0; b < c; ++b)
        cov[a * c + b] += (stack.pixel(p)[a] - mean[a]) * (stack.pixel(p)[b] - mean[b]);
  for (auto& v : cov) v /= double(n - 1);

  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  oracle::jacobi_eigen(cov, c, values, vectors);
  for (std::uint32_t j = 0; j < k; ++j) {
    auto& v = vectors[j];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < c; ++i)
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0)
      for (auto& x : v) x = -x;
    for (std::size_t p = 0; p < n; ++p) {
      double proj = 0;
      for (std::uint32_t a = 0; a < c; ++a) proj += (stack.pixel(p)[a] - mean[a]) * v[a];
      ASSERT_NEAR(got.pixel(p)[j], proj, 1e-5) << "component " << j << " pixel " << p;
    }
  }
}

TEST(Pca, FullBasisPreservesPairwiseDistances) {
  std::mt19937_64 rng(5);
  const auto stack = oracle::random_stack(rng, 5, 6, 4);
  const auto proj = pca_features(stack, 4);
  for (std::size_t i = 0; i < stack.pixel_count(); ++i) {
    for (std::size_t j = i + 1; j < stack.pixel_count(); ++j) {
      double d0 = 0, d1 = 0;
      for (int c = 0; c < 4; ++c) {
        d0 += std::pow(stack.pixel(i)[c] - stack.pixel(j)[c], 2);
        d1 += std::pow(proj.pixel(i)[c] - proj.pixel(j)[c], 2);
      }
      ASSERT_NEAR(std::sqrt(d1), std::sqrt(d0), 1e-4 * std::max(1.0, std::sqrt(d0)));
    }
  }
}

TEST(Pca, RankOneCapturesAllVariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<float> scale(-2.0f, 2.0f);
  const std::vector<float> dir{0.2f, -0.5f, 0.9f, 0.1f, 0.4f};
  std::vector<float> data;
  for (int p = 0; p < 49; ++p) {
    const float s = scale(rng);
    for (float d : dir) data.push_back(s * d);
  }
  const ChannelStack stack(7, 7, 5, data);
  const auto proj = pca_features(stack, 1);

  // total variance of the input vs variance of the single component
  double total = 0, captured = 0;
  std::vector<double> mean(5, 0);
  for (std::size_t p = 0; p < 49; ++p)
    for (int c = 0; c < 5; ++c) mean[c] += stack.pixel(p)[c] / 49.0;
  for (std::size_t p = 0; p < 49; ++p) {
    for (int c = 0; c < 5; ++c) total += std::pow(stack.pixel(p)[c] - mean[c], 2);
    captured += std::pow(proj.pixel(p)[0], 2);
  }
  EXPECT_LT(std::abs(total - captured) / 48.0, 1e-6);
}

TEST(Pca, RejectsBadK) {
  const ChannelStack s(2, 2, 3, std::vector<float>(12, 1.0f));
  EXPECT_THROW(pca_features(s, 0), Error);
  EXPECT_THROW(pca_features(s, 4), Error);
}

TEST(Rgb, IdentityWeightsReturnInput) {
  std::mt19937_64 rng(2);
  const auto s = oracle::random_stack(rng, 4, 4, 3);
  const BandWeights identity{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(rgb_reconstruct(s, identity), s);
}

TEST(Rgb, ConstantStackGivesConstantRgb) {
  const ChannelStack s(3, 3, 9, std::vector<float>(81, 0.7f));
  const auto rgb = rgb_reconstruct(s);
  for (float v : rgb.data()) EXPECT_FLOAT_EQ(v, 0.7f);
}

TEST(Rgb, BandThirdsOrdering) {
  // 6 bands: B <- {0,1}, G <- {2,3}, R <- {4,5}
  const ChannelStack s(1, 1, 6, {1, 3, 10, 20, 100, 300});
  const auto rgb = rgb_reconstruct(s);
  EXPECT_FLOAT_EQ(rgb.at(0, 0, 0), 200.0f);
  EXPECT_FLOAT_EQ(rgb.at(0, 0, 1), 15.0f);
  EXPECT_FLOAT_EQ(rgb.at(0, 0, 2), 2.0f);

  const auto two = BandWeights::band_thirds(2);
  EXPECT_NO_THROW(two.validate());
  const auto one = BandWeights::band_thirds(1);
  EXPECT_NO_THROW(one.validate());
}

TEST(Rgb, WeightsValidationAndJson) {
  EXPECT_THROW(parse_band_weights_json(R"({"r":[0.5,0.5],"g":[1,0],"b":[1]})"), Error);
  EXPECT_THROW(parse_band_weights_json(R"({"r":[-1,2],"g":[1,0],"b":[0,1]})"), Error);
  EXPECT_THROW(parse_band_weights_json(R"({"r":[0.2,0.2],"g":[1,0],"b":[0,1]})"), Error);
  const auto w = BandWeights::band_thirds(7);
  const auto back = parse_band_weights_json(band_weights_to_json(w));
  EXPECT_EQ(back.r, w.r);
  EXPECT_EQ(back.g, w.g);
  EXPECT_EQ(back.b, w.b);

  const ChannelStack s(1, 1, 2, {1, 2});
  EXPECT_THROW(rgb_reconstruct(s, BandWeights::band_thirds(3)), Error);
}

}  // namespace
}  // namespace geoseg
