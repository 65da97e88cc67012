#pragma once

// Random frames and programs for property tests. Coordinates are integers so
// the geometry predicates compare exactly after scaling.

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "vizfilter/vizfilter.hpp"

namespace vztest {

using vizfilter::Adjective;
using vizfilter::BBox;
using vizfilter::Detection;
using vizfilter::DetectionKind;
using vizfilter::FindChain;
using vizfilter::Item;
using vizfilter::Program;
using vizfilter::SceneFrame;
using vizfilter::Target;

inline constexpr std::array<const char*, 6> kObjectLabels = {"bus", "person", "car", "can", "bottle", "sign"};
inline constexpr std::array<const char*, 7> kTextLabels = {"73",    "Night Owl", "JAN 10 2024", "12:30",
                                                           "EXIT", "Route 525", "21"};

struct NamedRgb {
  const char* name;
  vizfilter::Rgb rgb;
};
// Close to, but not exactly on, reference colors.
inline constexpr std::array<NamedRgb, 5> kPaint = {{
    {"red", {250, 12, 8}},
    {"white", {244, 246, 250}},
    {"blue", {10, 20, 235}},
    {"black", {12, 10, 14}},
    {"yellow", {250, 240, 20}},
}};

inline constexpr std::array<const char*, 10> kChainTargets = {
    "any object", "any text", "bus", "person", "car", "grocery product", "sign", "number", "date", "time"};

inline constexpr std::array<const char*, 16> kChainAdjectives = {
    "red",        "white",        "blue",        "black",      "upper left", "upper center",
    "upper right", "left middle", "center middle", "right middle", "lower left", "lower center",
    "lower right", "largest",     "smallest",    "yellow"};

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class C>
  const auto& pick(const C& c) {
    return c[static_cast<std::size_t>(uniform(0, static_cast<int>(c.size()) - 1))];
  }

  /// A box inside `outer`, or overlapping it partly when `loose`; clipped to
  /// the frame.
  BBox box_in(const BBox& outer, const BBox& frame, bool loose) {
    const int ow = static_cast<int>(outer.w), oh = static_cast<int>(outer.h);
    int w = uniform(std::max(2, ow / 8), std::max(2, ow));
    int h = uniform(std::max(2, oh / 8), std::max(2, oh));
    int x = static_cast<int>(outer.x) + uniform(0, std::max(0, ow - w));
    int y = static_cast<int>(outer.y) + uniform(0, std::max(0, oh - h));
    if (loose) {
      x += uniform(-w, w);
      y += uniform(-h, h);
    }
    const int fw = static_cast<int>(frame.w), fh = static_cast<int>(frame.h);
    x = std::clamp(x, 0, fw - 2);
    y = std::clamp(y, 0, fh - 2);
    w = std::clamp(w, 1, fw - x);
    h = std::clamp(h, 1, fh - y);
    return {double(x), double(y), double(w), double(h)};
  }

  /// Frame with up to `max_detections` detections, nested at random. Color
  /// data is either dominant colors, a color attribute, or absent.
  SceneFrame frame(int max_detections = 10, bool allow_equal_boxes = true) {
    SceneFrame f;
    f.frame_id = "r" + std::to_string(counter_++);
    f.width = uniform(200, 1600);
    f.height = uniform(200, 1200);
    const int n = uniform(0, max_detections);
    for (int i = 0; i < n; ++i) {
      Detection d;
      d.id = "d" + std::to_string(i);
      d.confidence = uniform(30, 99) / 100.0;
      const bool text = chance(0.4);
      d.kind = text ? DetectionKind::text : DetectionKind::object;
      d.label = text ? pick(kTextLabels) : pick(kObjectLabels);
      if (i > 0 && chance(0.65)) {
        const auto& outer = f.detections[static_cast<std::size_t>(uniform(0, i - 1))];
        d.bbox = (allow_equal_boxes && chance(0.05)) ? outer.bbox : box_in(outer.bbox, f.bounds(), chance(0.2));
      } else {
        d.bbox = box_in(f.bounds(), f.bounds(), false);
      }
      if (chance(0.45)) {
        const auto& p = pick(kPaint);
        d.dominant_colors.push_back(p.rgb);
        if (chance(0.3)) d.dominant_colors.push_back(pick(kPaint).rgb);
      } else if (chance(0.4)) {
        d.attributes.push_back(pick(kPaint).name);
      }
      f.detections.push_back(std::move(d));
    }
    return f;
  }

  Target target(const vizfilter::Registry& r, const char* name) { return r.target_for(name); }

  FindChain chain(const vizfilter::Registry& r, int max_depth = 3) {
    FindChain c;
    const int n = uniform(1, max_depth);
    for (int i = 0; i < n; ++i) {
      Item it;
      if (i == 0 && n >= 2 && chance(0.15)) {
        it.target = chance(0.5) ? Target::color() : Target::count();
      } else {
        it.target = r.target_for(pick(kChainTargets));
        if (chance(0.35)) it.adjective = vizfilter::resolve_adjective(pick(kChainAdjectives));
      }
      c.items.push_back(std::move(it));
    }
    return c;
  }

  /// A chain read off a containment path that exists in `f`, so it usually
  /// matches something. Falls back to a random chain.
  FindChain chain_in(const SceneFrame& f, const vizfilter::Registry& r, int max_depth = 3) {
    if (f.detections.empty() || chance(0.3)) return chain(r, max_depth);
    std::vector<const Detection*> path{&pick(f.detections)};
    while (static_cast<int>(path.size()) < max_depth) {
      std::vector<const Detection*> containers;
      for (const auto& d : f.detections)
        if (std::find(path.begin(), path.end(), &d) == path.end() &&
            vizfilter::majority_contains(d.bbox, path.back()->bbox))
          containers.push_back(&d);
      if (containers.empty() || chance(0.25)) break;
      path.push_back(pick(containers));
    }
    FindChain c;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const Detection& d = *path[i];
      Item it;
      if (d.is_text()) {
        static constexpr std::array<const char*, 3> kinds = {"number", "date", "time"};
        it.target = chance(0.5) ? Target::any_text() : r.target_for(pick(kinds));
      } else if (chance(0.25)) {
        it.target = Target::any_object();
      } else if ((d.label == "can" || d.label == "bottle") && chance(0.5)) {
        it.target = r.target_for("grocery product");
      } else {
        it.target = r.target_for(d.label);
      }
      if (chance(0.35)) it.adjective = vizfilter::resolve_adjective(pick(kChainAdjectives));
      c.items.push_back(std::move(it));
    }
    if (c.items.size() >= 2 && chance(0.15)) {
      c.items.front().adjective.reset();
      c.items.front().target = chance(0.5) ? Target::color() : Target::count();
    }
    return c;
  }

  /// Any registry target and adjective, for syntax round-trips.
  Program any_program(const vizfilter::Registry& r) {
    static const auto names = r.canonical_names();
    static const auto adjectives = vizfilter::all_adjective_names();
    Program p;
    const int chains = uniform(1, 3);
    for (int c = 0; c < chains; ++c) {
      FindChain ch;
      const int n = uniform(1, 4);
      for (int i = 0; i < n; ++i) {
        Item it;
        it.target = r.target_for(pick(names));
        if (chance(0.4)) it.adjective = vizfilter::resolve_adjective(pick(adjectives));
        ch.items.push_back(std::move(it));
      }
      p.chains.push_back(std::move(ch));
    }
    if (chance(0.3)) p.name = "prog " + std::to_string(uniform(0, 999));
    return p;
  }

 private:
  std::mt19937 rng_;
  int counter_ = 0;
};

inline SceneFrame scaled(SceneFrame f, double s) {
  f.width *= s;
  f.height *= s;
  for (auto& d : f.detections) d.bbox = {d.bbox.x * s, d.bbox.y * s, d.bbox.w * s, d.bbox.h * s};
  return f;
}

}  // namespace vztest
