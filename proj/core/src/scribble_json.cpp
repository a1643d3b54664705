#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geoseg/error.hpp"
#include "geoseg/io.hpp"

namespace geoseg {

namespace {

std::uint32_t coordinate(const nlohmann::json& point, const char* key) {
  const auto it = point.find(key);
  if (it == point.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("scribble point needs integer \"") + key + "\"");
  }
  const auto value = it->get<std::int64_t>();
  if (value < 0 || value > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("scribble \"") + key + "\" out of range: " + std::to_string(value));
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

ScribbleSet parse_scribbles_json(const std::string& text, std::uint32_t height,
                                 std::uint32_t width) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("scribbles: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "scribbles: expected a JSON array");
  }
  std::vector<ScribblePoint> points;
  points.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_object()) {
      throw Error(ErrorCode::kInvalidArgument, "scribbles: each entry must be an object");
    }
    ScribblePoint p;
    p.x = coordinate(item, "x");
    p.y = coordinate(item, "y");
    p.label = kForegroundLabel;
    if (item.contains("label")) {
      const auto label = coordinate(item, "label");
      if (label > 255) {
        throw Error(ErrorCode::kInvalidArgument, "scribbles: label must fit in 8 bits");
      }
      p.label = static_cast<std::uint8_t>(label);
    }
    points.push_back(p);
  }
  return ScribbleSet(height, width, std::move(points));
}

std::string scribbles_to_json(const ScribbleSet& scribbles) {
  auto doc = nlohmann::json::array();
  for (const auto& p : scribbles.points()) {
    doc.push_back({{"x", p.x}, {"y", p.y}, {"label", p.label}});
  }
  return doc.dump();
}

ScribbleSet read_scribbles_json(const std::filesystem::path& path, std::uint32_t height,
                                std::uint32_t width) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scribbles_json(buffer.str(), height, width);
}

void write_scribbles_json(const ScribbleSet& scribbles, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open for writing: " + path.string());
  out << scribbles_to_json(scribbles) << '\n';
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

std::string format_float(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::kNumerical, "format_float failed");
  return std::string(buf.data(), ptr);
}

}  // namespace geoseg
