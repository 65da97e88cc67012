#include <gtest/gtest.h>

#include <set>

#include "vizfilter/vizfilter.hpp"

using namespace vizfilter;
using nlohmann::json;

namespace {
const Registry& reg() { return Registry::builtin(); }
}  // namespace

TEST(Registry, BuiltinShape) {
  EXPECT_NE(reg().find("any object"), nullptr);
  EXPECT_NE(reg().find("any text"), nullptr);
  EXPECT_EQ(reg().colors().size(), 14u);
  // 80 detector classes plus the extra model groups are all present
  for (const char* n : {"person", "toothbrush", "hair drier", "license plate", "exit sign", "trash can", "envelope",
                        "poster", "jar"})
    EXPECT_NE(reg().find(n), nullptr) << n;
}

TEST(Registry, ResolveGroceryItem) {
  const TargetSpec* s = resolve_target("grocery item", reg());
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->name, "grocery product");
  EXPECT_EQ(std::set<std::string>(s->group_members.begin(), s->group_members.end()),
            (std::set<std::string>{"package", "can", "bottle", "box", "product", "jar"}));
}

TEST(Registry, ResolveCaseFold) {
  ASSERT_NE(resolve_target("Bus", reg()), nullptr);
  EXPECT_EQ(resolve_target("Bus", reg())->name, "bus");
  EXPECT_EQ(resolve_target("  LICENSE   Plate", reg())->name, "license plate");
}

TEST(Registry, ResolveMissing) {
  EXPECT_EQ(resolve_target("unicorn", reg()), nullptr);
  EXPECT_EQ(resolve_target("keys", reg()), nullptr);
}

TEST(Registry, EveryAliasResolvesToOneCanonical) {
  std::set<std::string> seen;
  for (const auto& spec : reg().targets()) {
    EXPECT_TRUE(seen.insert(spec.name).second) << spec.name;
    EXPECT_EQ(resolve_target(spec.name, reg())->name, spec.name);
    for (const auto& a : spec.aliases) {
      EXPECT_TRUE(seen.insert(a).second) << a;
      EXPECT_EQ(resolve_target(a, reg())->name, spec.name) << a;
    }
  }
}

TEST(Registry, TextTypesCoverRecognizers) {
  for (auto k : kAllTextKinds) {
    bool found = false;
    for (const auto& spec : reg().targets())
      if (spec.kind == SpecKind::text && spec.backend_id == text_kind_id(k)) found = true;
    EXPECT_TRUE(found) << text_kind_id(k);
  }
}

TEST(Registry, ClassSetExpandsGroups) {
  EXPECT_EQ(reg().class_set(Target::object("grocery product")).size(), 7u);  // group plus 6 members
  EXPECT_EQ(reg().class_set(Target::object("bus")), (std::set<std::string>{"bus"}));
}

TEST(Registry, CanonicalLabel) {
  EXPECT_EQ(reg().canonical_label("People"), "person");
  EXPECT_EQ(reg().canonical_label("zeppelin"), "zeppelin");
}

TEST(Registry, RejectsDuplicateAlias) {
  const json doc = {{"targets",
                     {{{"name", "a"}, {"kind", "object"}, {"aliases", {"x"}}},
                      {{"name", "b"}, {"kind", "object"}, {"aliases", {"x"}}}}}};
  EXPECT_THROW(Registry::from_json(doc), RegistryError);
}

TEST(Registry, RejectsBadKind) {
  const json doc = {{"targets", {{{"name", "a"}, {"kind", "vegetable"}}}}};
  EXPECT_THROW(Registry::from_json(doc), RegistryError);
}

TEST(Registry, SmallCustomRegistry) {
  const json doc = {{"targets",
                     {{{"name", "any object"}, {"kind", "object"}},
                      {{"name", "widget"}, {"kind", "object"}, {"aliases", {"gadget"}}}}}};
  const Registry r = Registry::from_json(doc);
  EXPECT_EQ(r.canonical_names(), (std::vector<std::string>{"any object", "widget"}));
  EXPECT_EQ(resolve_target("gadget", r)->name, "widget");
  // colors fall back to the built-in table
  const std::vector<Rgb> red{{255, 0, 0}};
  EXPECT_EQ(name_color(red, r), "red");
}

TEST(Suggest, EditDistanceRanking) {
  EXPECT_EQ(suggest_names(reg(), "numbr", 2, 3).front(), "number");
  EXPECT_EQ(suggest_names(reg(), "buss", 2, 3).front(), "bus");
  EXPECT_TRUE(suggest_names(reg(), "qqqqqqqqqq", 2, 3).empty());
}
