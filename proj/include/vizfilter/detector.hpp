#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "vizfilter/geometry.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/scene.hpp"

namespace vizfilter {

struct DetectionQuery {
  enum class Mode { any_object, any_text, classes };

  Mode mode = Mode::any_object;
  /// Canonical class names, used when mode == classes.
  std::set<std::string> classes;

  static DetectionQuery objects() { return {Mode::any_object, {}}; }
  static DetectionQuery texts() { return {Mode::any_text, {}}; }
  static DetectionQuery of(std::set<std::string> classes) { return {Mode::classes, std::move(classes)}; }
};

/// Source of detections for a region of a frame. Implementations return the
/// frame's detections matching the query whose boxes mostly lie in `region`.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;
  virtual std::vector<Detection> detect(const SceneFrame& frame, const BBox& region,
                                        const DetectionQuery& query) const = 0;
};

/// Serves detections straight from annotated frames. Labels are compared after
/// registry canonicalization, so "table" in an annotation matches "dining table".
class FixtureBackend final : public DetectorBackend {
 public:
  explicit FixtureBackend(const Registry& registry = Registry::builtin()) : registry_(&registry) {}

  std::vector<Detection> detect(const SceneFrame& frame, const BBox& region,
                                const DetectionQuery& query) const override {
    std::vector<Detection> out;
    for (const auto& d : frame.detections) {
      if (!matches(d, query)) continue;
      if (!majority_contains(region, d.bbox)) continue;
      out.push_back(d);
    }
    std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
      if (a.confidence != b.confidence) return a.confidence > b.confidence;
      return a.id < b.id;
    });
    return out;
  }

 private:
  bool matches(const Detection& d, const DetectionQuery& q) const {
    switch (q.mode) {
      case DetectionQuery::Mode::any_object: return !d.is_text();
      case DetectionQuery::Mode::any_text: return d.is_text();
      case DetectionQuery::Mode::classes:
        return !d.is_text() && q.classes.count(registry_->canonical_label(d.label)) > 0;
    }
    return false;
  }

  const Registry* registry_;
};

inline std::vector<Detection> fixture_detect(const SceneFrame& frame, const BBox& region,
                                             const DetectionQuery& query,
                                             const Registry& r = Registry::builtin()) {
  return FixtureBackend(r).detect(frame, region, query);
}

}  // namespace vizfilter
