#include <gtest/gtest.h>

#include <random>

#include "geoseg/error.hpp"
#include "geoseg/skeleton.hpp"
#include "oracles.hpp"

namespace geoseg {
namespace {

BinaryMask from_rows(const std::vector<std::string>& rows) {
  const auto h = static_cast<std::uint32_t>(rows.size());
  const auto w = static_cast<std::uint32_t>(rows[0].size());
  std::vector<std::uint8_t> v;
  for (const auto& r : rows)
    for (char c : r) v.push_back(c == '#');
  return BinaryMask(h, w, std::move(v));
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
  for (std::size_t i = 0; i < a.pixel_count(); ++i)
    if (a.data()[i] && !b.data()[i]) return false;
  return true;
}

TEST(Skeleton, SinglePixelAndLineAreFixed) {
  const auto dot = from_rows({"...", ".#.", "..."});
  EXPECT_EQ(skeletonize(dot), dot);
  const auto line = from_rows({".......", ".#####.", "......."});
  EXPECT_EQ(skeletonize(line), line);
  const auto edge_line = from_rows({"#####"});
  EXPECT_EQ(skeletonize(edge_line), edge_line);
}

TEST(Skeleton, FilledSquareMatchesReferenceRule) {
  const auto square = from_rows({".......", ".#####.", ".#####.", ".#####.", ".#####.",
                                 ".#####.", "......."});
  const auto ref = oracle::zhang_suen_reference(
      std::vector<std::uint8_t>(square.data().begin(), square.data().end()), 7, 7);
  const auto got = skeletonize(square);
  EXPECT_EQ(std::vector<std::uint8_t>(got.data().begin(), got.data().end()), ref);
  EXPECT_EQ(got.count(), 1u);  // thins to the centre pixel
  EXPECT_TRUE(got.at(3, 3));
}

TEST(Skeleton, GuardKeepsComponentsPlainRuleWouldErase) {
  const auto block = from_rows({"....", ".##.", ".##.", "...."});
  const auto plain = oracle::zhang_suen_reference(
      std::vector<std::uint8_t>(block.data().begin(), block.data().end()), 4, 4);
  EXPECT_EQ(std::count(plain.begin(), plain.end(), 1), 0);
  const auto got = skeletonize(block);
  EXPECT_EQ(got.count(), 1u);
  EXPECT_TRUE(got.at(1, 1));
}

TEST(Skeleton, MatchesReferenceWhenNoComponentVanishes) {
  std::mt19937_64 rng(9);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto mask = oracle::random_blob_mask(rng, 24, 24);
    const auto ref = oracle::zhang_suen_reference(
        std::vector<std::uint8_t>(mask.data().begin(), mask.data().end()), 24, 24);
    if (oracle::count_components_8(BinaryMask(24, 24, ref)) !=
        oracle::count_components_8(mask)) {
      continue;
    }
    const auto got = skeletonize(mask);
    ASSERT_EQ(std::vector<std::uint8_t>(got.data().begin(), got.data().end()), ref);
    ++compared;
  }
  EXPECT_GT(compared, 50);
}

TEST(Skeleton, RandomMaskProperties) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::uint32_t> dim(1, 48);
  for (int trial = 0; trial < 120; ++trial) {
    const auto h = dim(rng), w = dim(rng);
    const auto mask = trial % 2 ? oracle::random_blob_mask(rng, h, w)
                                : oracle::random_mask(rng, h, w, 0.55);
    const auto skel = skeletonize(mask);
    ASSERT_TRUE(subset(skel, mask)) << "trial " << trial;
    ASSERT_EQ(oracle::count_components_8(skel), oracle::count_components_8(mask))
        << "trial " << trial;
    ASSERT_EQ(skeletonize(skel), skel) << "trial " << trial;
  }
}

TEST(Skeleton, EmptyMaskStaysEmpty) {
  EXPECT_EQ(skeletonize(BinaryMask::zeros(5, 6)).count(), 0u);
}

TEST(MaskToScribbles, RowMajorForegroundPoints) {
  const auto skel = from_rows({"....", ".##.", "...."});
  const auto set = mask_to_scribbles(skel);
  ASSERT_EQ(set.points().size(), 2u);
  EXPECT_EQ(set.points()[0], (ScribblePoint{1, 1, 1}));
  EXPECT_EQ(set.points()[1], (ScribblePoint{2, 1, 1}));
  try {
    mask_to_scribbles(BinaryMask::zeros(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySeeds);
  }
}

}  // namespace
}  // namespace geoseg
