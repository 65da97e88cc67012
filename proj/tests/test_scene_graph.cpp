#include <gtest/gtest.h>

#include "vizfilter/vizfilter.hpp"

using namespace vizfilter;

namespace {

const std::string kScenes = std::string(VZ_FIXTURES) + "/scenes/";
const Registry& reg() { return Registry::builtin(); }
SceneFrame scene(const std::string& name) { return load_scene(kScenes + name).front(); }

std::vector<std::string> child_ids(const SceneGraph& g, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(g.nodes[i].id);
  return out;
}

Detection obj(std::string id, BBox b, std::string label = "box") {
  Detection d;
  d.id = std::move(id);
  d.label = std::move(label);
  d.bbox = b;
  return d;
}

}  // namespace

TEST(SceneGraph, BusHierarchy) {
  const auto g = build_scene_graph(scene("bus_with_sign.json"), reg());
  EXPECT_EQ(child_ids(g, g.root_children), (std::vector<std::string>{"bus", "sign"}));
  const auto& bus = g.nodes[*g.index_of("bus")];
  EXPECT_EQ(child_ids(g, bus.children), (std::vector<std::string>{"30-node", "525-node"}));
  EXPECT_EQ(g.nodes[*g.index_of("30-node")].target_guess, Target::text("number"));
}

TEST(SceneGraph, EmptyFrame) {
  const auto g = build_scene_graph(scene("empty.json"), reg());
  EXPECT_TRUE(g.nodes.empty());
  EXPECT_TRUE(g.root_children.empty());
  EXPECT_TRUE(list_items(g).empty());
}

TEST(SceneGraph, SmallestContainerWins) {
  SceneFrame f{"n", 100, 100, {obj("C", {40, 40, 5, 5}), obj("A", {0, 0, 100, 100}), obj("B", {20, 20, 50, 50})}};
  const auto g = build_scene_graph(f, reg());
  EXPECT_EQ(child_ids(g, g.root_children), std::vector<std::string>{"A"});
  EXPECT_EQ(g.nodes[*g.nodes[*g.index_of("C")].parent].id, "B");
  EXPECT_EQ(g.nodes[*g.nodes[*g.index_of("B")].parent].id, "A");
  const auto items = list_items(g);
  ASSERT_EQ(items.size(), 3u);
  EXPECT_EQ(items[0].node_id, "A");
  EXPECT_EQ(items[1].node_id, "B");
  EXPECT_EQ(items[2].node_id, "C");
  EXPECT_EQ(items[2].depth, 2u);
}

TEST(SceneGraph, EqualBoxesBrokenById) {
  SceneFrame f{"n", 100, 100, {obj("b", {10, 10, 20, 20}), obj("a", {10, 10, 20, 20})}};
  const auto g = build_scene_graph(f, reg());
  EXPECT_EQ(child_ids(g, g.root_children), std::vector<std::string>{"a"});
  const auto& b = g.nodes[*g.index_of("b")];
  EXPECT_EQ(g.nodes[*b.parent].id, "a");
  EXPECT_TRUE(b.degenerate);
}

TEST(SceneGraph, StrictTree) {
  const auto g = build_scene_graph(scene("bench.json"), reg());
  std::size_t reachable = g.root_children.size();
  for (const auto& n : g.nodes) {
    reachable += n.children.size();
    if (n.parent) EXPECT_TRUE(majority_contains(g.nodes[*n.parent].bbox, n.bbox));
  }
  EXPECT_EQ(reachable, g.nodes.size());
}

TEST(SceneGraph, ListDisplay) {
  const auto items = list_items(build_scene_graph(scene("bus_with_sign.json"), reg()));
  ASSERT_EQ(items.size(), 4u);
  EXPECT_EQ(items[0].display, "bus");
  EXPECT_EQ(items[1].display, "text \"30\" on bus");
  EXPECT_EQ(items[2].display, "text \"525\" on bus");
  EXPECT_EQ(items[3].display, "sign");
}

TEST(Explore, BusNumberSelection) {
  const auto g = build_scene_graph(scene("bus_with_sign.json"), reg());
  EXPECT_EQ(print_program(generate_from_selection(g, "30-node")), "find NUMBER on BUS");
  EXPECT_EQ(print_program(generate_from_selection(g, "bus")), "find BUS");
  EXPECT_THROW(generate_from_selection(g, "root"), SelectionError);
  EXPECT_THROW(generate_from_selection(g, "nope"), SelectionError);
}

TEST(Explore, HintBecomesAdjective) {
  const auto g = build_scene_graph(scene("bench.json"), reg());
  EXPECT_EQ(print_program(generate_from_selection(g, "book")), "find blue BOOK on DINING TABLE");
}

TEST(Explore, UnresolvableHintsIgnored) {
  auto d = obj("x", {10, 10, 20, 20}, "car");
  d.attributes = {"shiny", "red", "small"};
  SceneFrame f{"n", 100, 100, {d}};
  const auto g = build_scene_graph(f, reg());
  ASSERT_EQ(g.nodes[0].adjective_hints.size(), 2u);
  EXPECT_EQ(print_program(generate_from_selection(g, "x")), "find red CAR");
}

TEST(Explore, TextWithoutTypeIsAnyText) {
  const auto g = build_scene_graph(scene("night_owl.json"), reg());
  EXPECT_EQ(print_program(generate_from_selection(g, "sign")), "find ANY TEXT on BUS");
}
