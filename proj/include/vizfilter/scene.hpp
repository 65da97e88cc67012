#pragma once

// Annotation file format:
//   {"frames": [{"frame_id": "f1", "width": 640, "height": 480,
//                "detections": [{"id": "bus1", "kind": "object", "label": "bus",
//                                "bbox": [x, y, w, h], "confidence": 0.9,
//                                "dominant_colors": [[r, g, b], ...],   // optional
//                                "attributes": ["red", ...]}]}]}         // optional
// A sibling raster <frame_id>.ppm, when present, supplies dominant colors for
// detections that do not list them.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "vizfilter/color.hpp"
#include "vizfilter/geometry.hpp"

namespace vizfilter {

enum class DetectionKind { object, text };

struct Detection {
  std::string id;
  DetectionKind kind = DetectionKind::object;
  /// Class name for objects, recognized string for text.
  std::string label;
  BBox bbox;
  double confidence = 1.0;
  std::vector<Rgb> dominant_colors;
  std::vector<std::string> attributes;

  bool is_text() const { return kind == DetectionKind::text; }
};

struct SceneFrame {
  std::string frame_id;
  double width = 0;
  double height = 0;
  std::vector<Detection> detections;

  BBox bounds() const { return {0, 0, width, height}; }

  const Detection* find(std::string_view id) const {
    for (const auto& d : detections)
      if (d.id == id) return &d;
    return nullptr;
  }
};

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw SceneError(path + "." + key + ": missing");
  return obj[key];
}

inline double require_number(const nlohmann::json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) throw SceneError(path + "." + key + ": expected number");
  return v.get<double>();
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw SceneError(path + "." + key + ": expected string");
  return v.get<std::string>();
}

inline Detection parse_detection(const nlohmann::json& j, const std::string& path, double fw, double fh) {
  Detection d;
  d.id = require_string(j, "id", path);
  const auto kind = require_string(j, "kind", path);
  if (kind == "object") d.kind = DetectionKind::object;
  else if (kind == "text") d.kind = DetectionKind::text;
  else throw SceneError(path + ".kind: expected \"object\" or \"text\"");
  d.label = require_string(j, "label", path);
  const auto& bb = require(j, "bbox", path);
  if (!bb.is_array() || bb.size() != 4) throw SceneError(path + ".bbox: expected [x, y, w, h]");
  for (std::size_t i = 0; i < 4; ++i)
    if (!bb[i].is_number()) throw SceneError(path + ".bbox[" + std::to_string(i) + "]: expected number");
  d.bbox = {bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(), bb[3].get<double>()};
  if (!d.bbox.valid()) throw SceneError(path + ".bbox: width and height must be positive");
  if (d.bbox.x < 0 || d.bbox.y < 0 || d.bbox.right() > fw || d.bbox.bottom() > fh)
    throw SceneError(path + ".bbox: box extends outside the frame");
  d.confidence = j.contains("confidence") ? require_number(j, "confidence", path) : 1.0;
  if (d.confidence < 0 || d.confidence > 1) throw SceneError(path + ".confidence: expected a value in [0, 1]");
  if (j.contains("dominant_colors")) {
    const auto& cs = j["dominant_colors"];
    if (!cs.is_array()) throw SceneError(path + ".dominant_colors: expected array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& c = cs[i];
      const std::string cp = path + ".dominant_colors[" + std::to_string(i) + "]";
      if (!c.is_array() || c.size() != 3) throw SceneError(cp + ": expected [r, g, b]");
      Rgb rgb;
      std::uint8_t* ch[3] = {&rgb.r, &rgb.g, &rgb.b};
      for (std::size_t k = 0; k < 3; ++k) {
        if (!c[k].is_number_integer() || c[k].get<int>() < 0 || c[k].get<int>() > 255)
          throw SceneError(cp + ": channels must be integers in [0, 255]");
        *ch[k] = static_cast<std::uint8_t>(c[k].get<int>());
      }
      d.dominant_colors.push_back(rgb);
    }
  }
  if (j.contains("attributes")) {
    if (!j["attributes"].is_array()) throw SceneError(path + ".attributes: expected array");
    for (const auto& a : j["attributes"]) {
      if (!a.is_string()) throw SceneError(path + ".attributes: expected strings");
      d.attributes.push_back(a.get<std::string>());
    }
  }
  return d;
}

}  // namespace detail

/// Parses an annotation document. `raster_dir`, when given, is searched for
/// `<frame_id>.ppm` rasters.
inline std::vector<SceneFrame> parse_scene(const nlohmann::json& doc,
                                           const std::optional<std::filesystem::path>& raster_dir = {}) {
  if (!doc.is_object()) throw SceneError("$: expected object");
  const auto& frames = detail::require(doc, "frames", "$");
  if (!frames.is_array()) throw SceneError("$.frames: expected array");
  std::vector<SceneFrame> out;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const std::string path = "$.frames[" + std::to_string(f) + "]";
    const auto& fj = frames[f];
    SceneFrame frame;
    frame.frame_id = detail::require_string(fj, "frame_id", path);
    frame.width = detail::require_number(fj, "width", path);
    frame.height = detail::require_number(fj, "height", path);
    if (frame.width <= 0 || frame.height <= 0) throw SceneError(path + ": width and height must be positive");
    const auto& dets = fj.contains("detections") ? fj["detections"] : nlohmann::json::array();
    if (!dets.is_array()) throw SceneError(path + ".detections: expected array");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const std::string dp = path + ".detections[" + std::to_string(i) + "]";
      auto d = detail::parse_detection(dets[i], dp, frame.width, frame.height);
      if (!ids.insert(d.id).second) throw SceneError(dp + ".id: duplicate id \"" + d.id + "\"");
      frame.detections.push_back(std::move(d));
    }
    if (raster_dir) {
      const auto raster_path = *raster_dir / (frame.frame_id + ".ppm");
      if (std::filesystem::exists(raster_path)) {
        const Raster raster = read_ppm(raster_path);
        for (auto& d : frame.detections)
          if (d.dominant_colors.empty()) d.dominant_colors = extract_dominant_colors(raster, d.bbox);
      }
    }
    out.push_back(std::move(frame));
  }
  return out;
}

inline std::vector<SceneFrame> load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SceneError(path.string() + ": " + e.what());
  }
  try {
    return parse_scene(doc, path.parent_path());
  } catch (const ColorError& e) {
    throw SceneError(path.string() + ": " + e.what());
  }
}

}  // namespace vizfilter
