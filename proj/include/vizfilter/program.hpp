#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vizfilter/text_util.hpp"

namespace vizfilter {

/// Canonical names for the generic targets and properties.
inline constexpr std::string_view kAnyObject = "any object";
inline constexpr std::string_view kAnyText = "any text";
inline constexpr std::string_view kColorProperty = "color";
inline constexpr std::string_view kCountProperty = "count";

enum class TargetKind { any_object, object_class, any_text, text_type, property };

/// What a program item detects. `name` is the canonical registry name, or the
/// raw lower-cased name when the target does not resolve (hallucinated classes
/// are carried as object classes so they can be reported and repaired).
struct Target {
  TargetKind kind = TargetKind::any_object;
  std::string name = std::string(kAnyObject);

  static Target any_object() { return {TargetKind::any_object, std::string(kAnyObject)}; }
  static Target any_text() { return {TargetKind::any_text, std::string(kAnyText)}; }
  static Target object(std::string name) { return {TargetKind::object_class, std::move(name)}; }
  static Target text(std::string name) { return {TargetKind::text_type, std::move(name)}; }
  static Target color() { return {TargetKind::property, std::string(kColorProperty)}; }
  static Target count() { return {TargetKind::property, std::string(kCountProperty)}; }

  bool is_property() const { return kind == TargetKind::property; }
  bool is_textual() const { return kind == TargetKind::any_text || kind == TargetKind::text_type; }
  bool is_objectual() const {
    return kind == TargetKind::any_object || kind == TargetKind::object_class;
  }

  friend bool operator==(const Target&, const Target&) = default;
};

enum class AdjectiveKind { color, location, size };

inline constexpr std::array<std::string_view, 14> kColorNames = {
    "black", "dark gray", "light gray", "white",   "gray",   "red",    "green",
    "blue",  "cyan",      "yellow",     "magenta", "orange", "purple", "brown"};

/// Row-major 3x3 grid, upper row first.
inline constexpr std::array<std::string_view, 9> kLocationNames = {
    "upper left",  "upper center",  "upper right",  "left middle", "center middle",
    "right middle", "lower left", "lower center", "lower right"};

inline constexpr std::array<std::string_view, 2> kSizeNames = {"largest", "smallest"};

struct Adjective {
  AdjectiveKind kind = AdjectiveKind::color;
  std::string name;

  friend bool operator==(const Adjective&, const Adjective&) = default;
};

/// Alternate spellings accepted for adjectives, mapped to canonical names.
/// Includes the irregular location spellings ("center lower") seen in the app's
/// original adjective list.
struct AdjectiveAlias {
  std::string_view alias;
  std::string_view canonical;
};

inline constexpr std::array<AdjectiveAlias, 30> kAdjectiveAliases = {{
    {"grey", "gray"},
    {"dark grey", "dark gray"},
    {"light grey", "light gray"},
    {"center lower", "lower center"},
    {"bottom center", "lower center"},
    {"bottom", "lower center"},
    {"bottom left", "lower left"},
    {"bottom right", "lower right"},
    {"top left", "upper left"},
    {"top right", "upper right"},
    {"top center", "upper center"},
    {"center upper", "upper center"},
    {"top", "upper center"},
    {"middle left", "left middle"},
    {"left", "left middle"},
    {"middle right", "right middle"},
    {"right", "right middle"},
    {"center", "center middle"},
    {"middle", "center middle"},
    {"centre", "center middle"},
    {"middle center", "center middle"},
    {"biggest", "largest"},
    {"big", "largest"},
    {"large", "largest"},
    {"tallest", "largest"},
    {"small", "smallest"},
    {"tiniest", "smallest"},
    {"littlest", "smallest"},
    {"upper middle", "upper center"},
    {"lower middle", "lower center"},
}};

/// Resolves a canonical adjective name or alias (case-insensitive).
inline std::optional<Adjective> resolve_adjective(std::string_view raw) {
  std::string name = text::normalize_name(raw);
  for (const auto& a : kAdjectiveAliases) {
    if (a.alias == name) {
      name = std::string(a.canonical);
      break;
    }
  }
  for (auto c : kColorNames)
    if (c == name) return Adjective{AdjectiveKind::color, name};
  for (auto l : kLocationNames)
    if (l == name) return Adjective{AdjectiveKind::location, name};
  for (auto s : kSizeNames)
    if (s == name) return Adjective{AdjectiveKind::size, name};
  return std::nullopt;
}

/// Every canonical adjective name in fixed order: colors, locations, sizes.
inline std::vector<std::string> all_adjective_names() {
  std::vector<std::string> out;
  for (auto c : kColorNames) out.emplace_back(c);
  for (auto l : kLocationNames) out.emplace_back(l);
  for (auto s : kSizeNames) out.emplace_back(s);
  return out;
}

struct Item {
  std::optional<Adjective> adjective;
  Target target;

  friend bool operator==(const Item&, const Item&) = default;
};

/// Items are stored innermost-first: index 0 is the thing being looked for,
/// the last index is the outermost container.
struct FindChain {
  std::vector<Item> items;

  friend bool operator==(const FindChain&, const FindChain&) = default;
};

/// Parallel chains with union semantics.
struct Program {
  std::vector<FindChain> chains;
  std::optional<std::string> name;

  friend bool operator==(const Program&, const Program&) = default;
};

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks the structural invariants that do not need a registry.
inline void check_structure(const Program& p) {
  if (p.chains.empty()) throw ProgramError("program has no chains");
  for (const auto& c : p.chains)
    if (c.items.empty()) throw ProgramError("program has an empty chain");
}

/// The block-mode starting point: two unset items.
inline Program default_program() {
  return Program{{FindChain{{Item{std::nullopt, Target::any_object()},
                             Item{std::nullopt, Target::any_object()}}}},
                 std::nullopt};
}

}  // namespace vizfilter
