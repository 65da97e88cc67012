#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vizfilter/default_registry.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/text_util.hpp"

namespace vizfilter {

enum class SpecKind { object, text, property };

struct TargetSpec {
  std::string name;
  SpecKind kind = SpecKind::object;
  std::vector<std::string> aliases;
  /// Non-empty for super-classes such as "grocery product".
  std::vector<std::string> group_members;
  /// Model or recognizer that serves the target. For text types this is the
  /// recognizer id (e.g. "credit_card").
  std::string backend_id;

  bool is_group() const { return !group_members.empty(); }
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct ReferenceColor {
  std::string name;
  Rgb rgb;
};

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Catalogue of program targets (object classes, text types, properties) plus
/// the reference color table used to name colors.
class Registry {
 public:
  Registry() = default;

  static Registry from_json(const nlohmann::json& doc) {
    Registry reg;
    if (!doc.is_object() || !doc.contains("targets") || !doc["targets"].is_array())
      throw RegistryError("registry: expected object with a \"targets\" array");
    for (const auto& t : doc["targets"]) {
      TargetSpec spec;
      spec.name = text::normalize_name(t.at("name").get<std::string>());
      const auto kind = t.at("kind").get<std::string>();
      if (kind == "object") spec.kind = SpecKind::object;
      else if (kind == "text") spec.kind = SpecKind::text;
      else if (kind == "property") spec.kind = SpecKind::property;
      else throw RegistryError("registry: target \"" + spec.name + "\" has unknown kind \"" + kind + "\"");
      if (t.contains("aliases"))
        for (const auto& a : t["aliases"]) spec.aliases.push_back(text::normalize_name(a.get<std::string>()));
      if (t.contains("group_members"))
        for (const auto& m : t["group_members"])
          spec.group_members.push_back(text::normalize_name(m.get<std::string>()));
      spec.backend_id = t.value("backend_id", std::string{});
      reg.add(std::move(spec));
    }
    if (doc.contains("colors")) {
      for (const auto& c : doc["colors"]) {
        const auto& rgb = c.at("rgb");
        reg.colors_.push_back({text::normalize_name(c.at("name").get<std::string>()),
                               Rgb{rgb.at(0).get<std::uint8_t>(), rgb.at(1).get<std::uint8_t>(),
                                   rgb.at(2).get<std::uint8_t>()}});
      }
      reg.check_colors();
    }
    for (const auto& spec : reg.targets_)
      for (const auto& m : spec.group_members)
        if (!reg.find(m)) throw RegistryError("registry: group \"" + spec.name + "\" lists unknown member \"" + m + "\"");
    return reg;
  }

  static Registry load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw RegistryError("registry: cannot open " + path.string());
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw RegistryError("registry: " + path.string() + ": " + e.what());
    }
  }

  /// The registry compiled into the library from data/registry.json.
  static const Registry& builtin() {
    static const Registry reg = from_json(nlohmann::json::parse(kDefaultRegistryJson));
    return reg;
  }

  /// Case-insensitive lookup of a canonical name or alias.
  const TargetSpec* find(std::string_view name) const {
    auto it = index_.find(text::normalize_name(name));
    return it == index_.end() ? nullptr : &targets_[it->second];
  }

  const std::vector<TargetSpec>& targets() const { return targets_; }
  const std::vector<ReferenceColor>& colors() const { return colors_; }
  bool empty() const { return targets_.empty(); }

  /// Every name the grammar accepts (canonical names and aliases).
  std::vector<std::string> all_names() const {
    std::vector<std::string> out;
    out.reserve(index_.size());
    for (const auto& [k, v] : index_) out.push_back(k);
    return out;
  }

  std::vector<std::string> canonical_names() const {
    std::vector<std::string> out;
    for (const auto& t : targets_) out.push_back(t.name);
    return out;
  }

  /// Program target for a registry entry.
  static Target to_target(const TargetSpec& spec) {
    switch (spec.kind) {
      case SpecKind::object:
        return spec.name == kAnyObject ? Target::any_object() : Target::object(spec.name);
      case SpecKind::text:
        return spec.name == kAnyText ? Target::any_text() : Target::text(spec.name);
      case SpecKind::property:
        return Target{TargetKind::property, spec.name};
    }
    return Target::any_object();
  }

  /// Resolves a user-supplied name to a target; unknown names become
  /// unresolved object classes.
  Target target_for(std::string_view raw) const {
    if (const auto* spec = find(raw)) return to_target(*spec);
    return Target::object(text::normalize_name(raw));
  }

  /// Canonical class names an object target matches: the class itself plus
  /// the members of a super-class.
  std::set<std::string> class_set(const Target& t) const {
    std::set<std::string> out{t.name};
    if (const auto* spec = find(t.name))
      for (const auto& m : spec->group_members) out.insert(m);
    return out;
  }

  /// Canonical class for a detector label, or the normalized label itself.
  std::string canonical_label(std::string_view label) const {
    if (const auto* spec = find(label)) return spec->name;
    return text::normalize_name(label);
  }

 private:
  void add(TargetSpec spec) {
    if (spec.name.empty()) throw RegistryError("registry: target with empty name");
    const std::size_t idx = targets_.size();
    auto claim = [&](const std::string& key) {
      auto [it, inserted] = index_.emplace(key, idx);
      if (!inserted && it->second != idx)
        throw RegistryError("registry: name \"" + key + "\" maps to both \"" +
                            targets_[it->second].name + "\" and \"" + spec.name + "\"");
    };
    claim(spec.name);
    for (const auto& a : spec.aliases) claim(a);
    targets_.push_back(std::move(spec));
  }

  void check_colors() const {
    if (colors_.size() != kColorNames.size())
      throw RegistryError("registry: color table must list exactly the 14 color names");
    for (std::size_t i = 0; i < kColorNames.size(); ++i)
      if (colors_[i].name != kColorNames[i])
        throw RegistryError("registry: color table entry " + std::to_string(i) + " should be \"" +
                            std::string(kColorNames[i]) + "\"");
  }

  std::vector<TargetSpec> targets_;
  std::map<std::string, std::size_t> index_;
  std::vector<ReferenceColor> colors_;
};

inline const TargetSpec* resolve_target(std::string_view name, const Registry& r) { return r.find(name); }

}  // namespace vizfilter
