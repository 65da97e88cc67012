#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vizfilter/geometry.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/recognizers.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/scene.hpp"

namespace vizfilter {

/// Id used to address the synthetic root (the whole frame).
inline constexpr std::string_view kRootNodeId = "root";

struct SceneNode {
  std::string id;
  DetectionKind kind = DetectionKind::object;
  std::string label;
  BBox bbox;
  Target target_guess;
  std::vector<Adjective> adjective_hints;
  /// Index of the parent node; empty for children of the root.
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  /// Parent chosen among equal-area mutual containers by id order.
  bool degenerate = false;
};

/// Strict containment tree over a frame's detections, rooted at the frame.
struct SceneGraph {
  std::string frame_id;
  std::vector<SceneNode> nodes;
  std::vector<std::size_t> root_children;

  std::optional<std::size_t> index_of(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == id) return i;
    return std::nullopt;
  }
};

/// Registry target for a recognizer kind, if the registry offers one.
inline std::optional<Target> text_target_for(TextKind kind, const Registry& r) {
  for (const auto& spec : r.targets())
    if (spec.kind == SpecKind::text && spec.backend_id == text_kind_id(kind)) return Registry::to_target(spec);
  return std::nullopt;
}

inline Target guess_target(const Detection& d, const Registry& r) {
  if (!d.is_text()) return r.target_for(d.label);
  if (auto kind = most_specific(d.label))
    if (auto t = text_target_for(*kind, r)) return *t;
  return Target::any_text();
}

/// Each detection hangs under the smallest other detection that mostly
/// contains it and is larger (equal area counts when the container's id sorts
/// first); otherwise under the root.
inline SceneGraph build_scene_graph(const SceneFrame& f, const Registry& r) {
  SceneGraph g;
  g.frame_id = f.frame_id;
  const auto& dets = f.detections;
  for (const auto& d : dets) {
    SceneNode node;
    node.id = d.id;
    node.kind = d.kind;
    node.label = d.label;
    node.bbox = d.bbox;
    node.target_guess = guess_target(d, r);
    for (const auto& a : d.attributes)
      if (auto adj = resolve_adjective(a)) node.adjective_hints.push_back(*adj);
    g.nodes.push_back(std::move(node));
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const double area = dets[i].bbox.area();
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < dets.size(); ++j) {
      if (j == i) continue;
      const double parea = dets[j].bbox.area();
      const bool larger = parea > area || (parea == area && dets[j].id < dets[i].id);
      if (!larger || !majority_contains(dets[j].bbox, dets[i].bbox)) continue;
      if (!best) {
        best = j;
        continue;
      }
      const double barea = dets[*best].bbox.area();
      if (parea < barea || (parea == barea && dets[j].id < dets[*best].id)) best = j;
    }
    g.nodes[i].parent = best;
    if (best) {
      g.nodes[i].degenerate = dets[*best].bbox.area() == area;
      g.nodes[*best].children.push_back(i);
    } else {
      g.root_children.push_back(i);
    }
  }
  return g;
}

struct SelectableItem {
  std::string node_id;
  std::string display;
  Target target_guess;
  std::size_t depth = 0;
};

/// Every node in depth-first order, children in detection order.
inline std::vector<SelectableItem> list_items(const SceneGraph& g) {
  std::vector<SelectableItem> out;
  auto visit = [&](auto&& self, std::size_t idx, std::size_t depth) -> void {
    const SceneNode& n = g.nodes[idx];
    std::string display = n.kind == DetectionKind::text ? "text \"" + n.label + "\"" : n.label;
    if (n.parent) display += " on " + g.nodes[*n.parent].label;
    out.push_back({n.id, std::move(display), n.target_guess, depth});
    for (auto c : n.children) self(self, c, depth + 1);
  };
  for (auto c : g.root_children) visit(visit, c, 0);
  return out;
}

class SelectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Program that finds the selected node: the node and each ancestor below the
/// root become items, innermost first.
inline Program generate_from_selection(const SceneGraph& g, std::string_view node_id) {
  auto idx = g.index_of(node_id);
  if (!idx) {
    if (node_id == kRootNodeId) throw SelectionError("the root (whole frame) cannot be selected");
    throw SelectionError("no item with id \"" + std::string(node_id) + "\"");
  }
  FindChain chain;
  for (std::optional<std::size_t> cur = idx; cur; cur = g.nodes[*cur].parent) {
    const SceneNode& n = g.nodes[*cur];
    Item it{std::nullopt, n.target_guess};
    if (!n.adjective_hints.empty()) it.adjective = n.adjective_hints.front();
    chain.items.push_back(std::move(it));
  }
  return Program{{std::move(chain)}, std::nullopt};
}

}  // namespace vizfilter
