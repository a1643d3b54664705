#include "geoseg/segment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "geoseg/error.hpp"
#include "geoseg/io.hpp"

namespace geoseg {

namespace {

void require_same_shape(std::uint32_t h1, std::uint32_t w1, std::uint32_t h2, std::uint32_t w2,
                        const char* what) {
  if (h1 != h2 || w1 != w2) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(h1) + "x" + std::to_string(w1) +
                    " vs " + std::to_string(h2) + "x" + std::to_string(w2));
  }
}

void require_normalized(const DistanceMap& map, const char* what) {
  if (!map.normalized()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": map must be normalized");
  }
}

// Pixel values sorted ascending alongside the running count of gt pixels, so
// that any threshold resolves to (selected, intersection) with one search.
struct SortedMap {
  std::vector<float> values;
  std::vector<std::size_t> gt_prefix;  // gt_prefix[k] = gt pixels among first k values
  std::size_t gt_count = 0;

  SortedMap(const DistanceMap& map, const BinaryMask& gt) {
    const std::size_t n = map.pixel_count();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto data = map.data();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data[a] < data[b]; });
    values.resize(n);
    gt_prefix.assign(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
      values[k] = data[order[k]];
      gt_prefix[k + 1] = gt_prefix[k] + gt.data()[order[k]];
    }
    gt_count = gt_prefix[n];
  }

  double dice_at(double t) const {
    const auto selected = static_cast<std::size_t>(
        std::upper_bound(values.begin(), values.end(), t,
                         [](double lhs, float rhs) { return lhs < static_cast<double>(rhs); }) -
        values.begin());
    return dice_from_counts(gt_prefix[selected], selected, gt_count);
  }
};

void pick_best(DiceCurve& curve) {
  curve.best_dice = -1.0;
  for (std::size_t k = 0; k < curve.dice.size(); ++k) {
    if (curve.dice[k] > curve.best_dice) {
      curve.best_dice = curve.dice[k];
      curve.best_threshold = curve.thresholds[k];
    }
  }
}

}  // namespace

DistanceMap normalize_map(const DistanceMap& map) {
  const auto data = map.data();
  const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
  const double lo = *lo_it;
  const double range = static_cast<double>(*hi_it) - lo;
  std::vector<float> out(data.size(), 0.0f);
  if (range > 0.0) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      out[i] = std::clamp(static_cast<float>((data[i] - lo) / range), 0.0f, 1.0f);
    }
  }
  return DistanceMap(map.height(), map.width(), std::move(out), true);
}

BinaryMask threshold_segment(const DistanceMap& map, double t) {
  require_normalized(map, "threshold_segment");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in [0, 1]");
  }
  std::vector<std::uint8_t> out(map.pixel_count());
  const auto data = map.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(data[i]) <= t ? 1 : 0;
  return BinaryMask(map.height(), map.width(), std::move(out));
}

double dice_from_counts(std::size_t intersection, std::size_t size_a, std::size_t size_b) {
  if (size_a + size_b == 0) return 1.0;
  return 2.0 * static_cast<double>(intersection) / static_cast<double>(size_a + size_b);
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a.height(), a.width(), b.height(), b.width(), "dice");
  std::size_t both = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) both += a.data()[i] & b.data()[i];
  return dice_from_counts(both, a.count(), b.count());
}

DiceCurve dice_sweep(const DistanceMap& map, const BinaryMask& gt, std::uint32_t n_steps) {
  require_normalized(map, "dice_sweep");
  require_same_shape(map.height(), map.width(), gt.height(), gt.width(), "dice_sweep");
  if (n_steps < 2) throw Error(ErrorCode::kInvalidArgument, "dice_sweep: n_steps must be >= 2");
  const SortedMap sorted(map, gt);
  DiceCurve curve;
  curve.thresholds.resize(n_steps);
  curve.dice.resize(n_steps);
  for (std::uint32_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n_steps - 1);
    curve.thresholds[k] = t;
    curve.dice[k] = sorted.dice_at(t);
  }
  pick_best(curve);
  return curve;
}

DiceCurve dice_sweep_distinct(const DistanceMap& map, const BinaryMask& gt) {
  require_same_shape(map.height(), map.width(), gt.height(), gt.width(), "dice_sweep_distinct");
  const SortedMap sorted(map, gt);
  DiceCurve curve;
  const std::size_t n = sorted.values.size();
  for (std::size_t k = 0; k < n; ++k) {
    // last occurrence of each distinct value closes its threshold class
    if (k + 1 < n && sorted.values[k + 1] == sorted.values[k]) continue;
    curve.thresholds.push_back(sorted.values[k]);
    curve.dice.push_back(dice_from_counts(sorted.gt_prefix[k + 1], k + 1, sorted.gt_count));
  }
  pick_best(curve);
  return curve;
}

std::string dice_curve_to_csv(const DiceCurve& curve) {
  std::string out = "threshold,dice\n";
  for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
    out += format_float(curve.thresholds[k]);
    out += ',';
    out += format_float(curve.dice[k]);
    out += '\n';
  }
  return out;
}

std::string dice_curve_summary_json(const DiceCurve& curve) {
  return nlohmann::json{{"best_threshold", curve.best_threshold}, {"best_dice", curve.best_dice}}
      .dump();
}

std::string dice_curve_to_json(const DiceCurve& curve) {
  return nlohmann::json{{"thresholds", curve.thresholds},
                        {"dice", curve.dice},
                        {"best_threshold", curve.best_threshold},
                        {"best_dice", curve.best_dice}}
      .dump();
}

DiceCurve parse_dice_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "threshold,dice") {
    throw Error(ErrorCode::kMalformedHeader, "curve CSV: expected header 'threshold,dice'");
  }
  auto parse = [](const std::string& field) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw Error(ErrorCode::kInvalidArgument, "curve CSV: bad number '" + field + "'");
    }
    return value;
  };
  DiceCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "curve CSV: missing comma in '" + line + "'");
    }
    curve.thresholds.push_back(parse(line.substr(0, comma)));
    curve.dice.push_back(parse(line.substr(comma + 1)));
  }
  pick_best(curve);
  return curve;
}

std::filesystem::path dice_curve_sidecar_path(const std::filesystem::path& csv_path) {
  auto sidecar = csv_path;
  sidecar.replace_extension(".json");
  return sidecar;
}

void write_dice_curve(const DiceCurve& curve, const std::filesystem::path& csv_path) {
  auto write_text = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot open for writing: " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
  };
  write_text(csv_path, dice_curve_to_csv(curve));
  write_text(dice_curve_sidecar_path(csv_path), dice_curve_summary_json(curve) + "\n");
}

}  // namespace geoseg
