#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geoseg/tensor.hpp"

namespace geoseg {

/// Sampled threshold -> Dice function with its argmax. Ties resolve to the
/// smallest threshold (the more conservative segmentation).
struct DiceCurve {
  std::vector<double> thresholds;
  std::vector<double> dice;
  double best_threshold = 0.0;
  double best_dice = 0.0;

  friend bool operator==(const DiceCurve&, const DiceCurve&) = default;
};

inline constexpr std::uint32_t kDefaultSweepSteps = 256;

/// (v - min) / (max - min); a constant map becomes all zeros.
DistanceMap normalize_map(const DistanceMap& map);

/// mask = 1 where value <= t. Requires a normalized map and t in [0, 1].
BinaryMask threshold_segment(const DistanceMap& map, double t);

/// 2|A & B| / (|A| + |B|); two empty masks score 1.
double dice(const BinaryMask& a, const BinaryMask& b);
double dice_from_counts(std::size_t intersection, std::size_t size_a, std::size_t size_b);

/// Dice at t = k / (n_steps - 1), k = 0 .. n_steps - 1.
DiceCurve dice_sweep(const DistanceMap& map, const BinaryMask& gt,
                     std::uint32_t n_steps = kDefaultSweepSteps);

/// Dice at every distinct map value (the exhaustive threshold set).
DiceCurve dice_sweep_distinct(const DistanceMap& map, const BinaryMask& gt);

// CSV "threshold,dice" plus a JSON sidecar {"best_threshold":..,"best_dice":..}.
std::string dice_curve_to_csv(const DiceCurve& curve);
std::string dice_curve_summary_json(const DiceCurve& curve);
std::string dice_curve_to_json(const DiceCurve& curve);
DiceCurve parse_dice_curve_csv(const std::string& text);
void write_dice_curve(const DiceCurve& curve, const std::filesystem::path& csv_path);
std::filesystem::path dice_curve_sidecar_path(const std::filesystem::path& csv_path);

}  // namespace geoseg
