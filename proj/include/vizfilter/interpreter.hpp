#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vizfilter/color.hpp"
#include "vizfilter/detector.hpp"
#include "vizfilter/geometry.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/recognizers.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/scene.hpp"

namespace vizfilter {

struct ExecutionMatch {
  /// Detection ids, outermost first. Property matches list only the levels
  /// above the property: the colored object, or the container whose items
  /// were counted (empty when counting across the whole frame).
  std::vector<std::string> path;
  std::string value;

  friend bool operator==(const ExecutionMatch&, const ExecutionMatch&) = default;
};

struct AdjectiveMiss {
  std::size_t depth = 0;
  std::string requested;
  std::optional<std::string> observed;

  friend bool operator==(const AdjectiveMiss&, const AdjectiveMiss&) = default;
};

struct ChainResult {
  std::vector<ExecutionMatch> matches;
  /// First level (0 = outermost item) where nothing survived.
  std::optional<std::size_t> failure_depth;
  std::optional<AdjectiveMiss> adjective_miss;
  /// Labels of the detections found at the deepest level reached.
  std::vector<std::string> partial_labels;
  /// Text seen inside the located parents that did not match the requested
  /// text type.
  std::vector<std::string> backup_texts;
  /// A color filter met detections with no color data.
  bool missing_color_data = false;

  bool found() const { return !matches.empty(); }
};

class InterpreterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Color of a detection: named from its dominant colors, else the first
/// color attribute.
inline std::optional<std::string> detection_color(const Detection& d, const Registry& r) {
  if (!d.dominant_colors.empty()) return name_color(d.dominant_colors, r);
  for (const auto& a : d.attributes)
    if (auto adj = resolve_adjective(a); adj && adj->kind == AdjectiveKind::color) return adj->name;
  return std::nullopt;
}

namespace detail {

inline bool has_color(const Detection& d, const std::string& color, const Registry& r) {
  if (!d.dominant_colors.empty()) return name_color(d.dominant_colors, r) == color;
  return std::any_of(d.attributes.begin(), d.attributes.end(), [&](const std::string& a) {
    auto adj = resolve_adjective(a);
    return adj && adj->kind == AdjectiveKind::color && adj->name == color;
  });
}

/// Area threshold for the largest/smallest quarter of `areas` (nearest rank,
/// counted from the relevant end).
inline double quartile_threshold(std::vector<double> areas, bool largest) {
  std::sort(areas.begin(), areas.end());
  const std::size_t n = areas.size();
  const auto rank = static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(n)));
  return largest ? areas[n - rank] : areas[rank - 1];
}

}  // namespace detail

/// Filters one parent's candidates by an adjective. Location is relative to
/// `parent` (the frame at the outermost level); size compares candidates of
/// the same parent: the top/bottom quarter by area when there are at least
/// four, otherwise the extreme (ties kept).
inline std::vector<Detection> apply_adjective(const Adjective& adj, std::span<const Detection> candidates,
                                              const BBox& parent, const SceneFrame& frame, const Registry& r,
                                              bool* missing_color_data = nullptr) {
  (void)frame;
  std::vector<Detection> out;
  switch (adj.kind) {
    case AdjectiveKind::color:
      for (const auto& d : candidates) {
        if (d.dominant_colors.empty() && d.attributes.empty() && missing_color_data) *missing_color_data = true;
        if (detail::has_color(d, adj.name, r)) out.push_back(d);
      }
      break;
    case AdjectiveKind::location:
      for (const auto& d : candidates) {
        try {
          if (quadrant_label(d.bbox, parent) == adj.name) out.push_back(d);
        } catch (const GeometryError&) {
          // center outside the parent: no quadrant
        }
      }
      break;
    case AdjectiveKind::size: {
      if (candidates.empty()) break;
      const bool largest = adj.name == "largest";
      std::vector<double> areas;
      for (const auto& d : candidates) areas.push_back(d.bbox.area());
      double threshold;
      if (candidates.size() >= 4) {
        threshold = detail::quartile_threshold(areas, largest);
      } else {
        threshold = largest ? *std::max_element(areas.begin(), areas.end())
                            : *std::min_element(areas.begin(), areas.end());
      }
      for (const auto& d : candidates)
        if (largest ? d.bbox.area() >= threshold : d.bbox.area() <= threshold) out.push_back(d);
      break;
    }
  }
  return out;
}

/// Adjective value a detection shows, for "found white bus" style messages.
inline std::optional<std::string> observed_adjective(const Adjective& requested, const Detection& d,
                                                     const BBox& parent, const Registry& r) {
  switch (requested.kind) {
    case AdjectiveKind::color: return detection_color(d, r);
    case AdjectiveKind::location:
      try {
        return quadrant_label(d.bbox, parent);
      } catch (const GeometryError&) {
        return std::nullopt;
      }
    case AdjectiveKind::size: return std::nullopt;
  }
  return std::nullopt;
}

/// A resolved prefix of a chain: detections from the outermost level down.
struct PartialMatch {
  std::vector<const Detection*> path;

  BBox bbox(const SceneFrame& f) const { return path.empty() ? f.bounds() : path.back()->bbox; }
  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto* d : path) out.push_back(d->id);
    return out;
  }
};

/// Evaluates a property item over the matches of the level above it.
inline std::vector<ExecutionMatch> eval_property(const Target& property, std::span<const PartialMatch> parents,
                                                 const Registry& r) {
  std::vector<ExecutionMatch> out;
  if (property.name == kColorProperty) {
    for (const auto& p : parents)
      out.push_back({p.ids(), detection_color(*p.path.back(), r).value_or("unknown color")});
  } else if (property.name == kCountProperty) {
    // one count per container of the counted items
    std::vector<std::pair<std::vector<std::string>, std::size_t>> groups;
    for (const auto& p : parents) {
      auto key = p.ids();
      key.pop_back();
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
      if (it == groups.end()) groups.emplace_back(std::move(key), 1);
      else ++it->second;
    }
    for (auto& [key, n] : groups) out.push_back({std::move(key), std::to_string(n)});
  } else {
    throw InterpreterError("unknown property \"" + property.name + "\"");
  }
  return out;
}

namespace detail {

inline DetectionQuery query_for(const Target& t, const Registry& r) {
  switch (t.kind) {
    case TargetKind::any_object: return DetectionQuery::objects();
    case TargetKind::object_class: return DetectionQuery::of(r.class_set(t));
    case TargetKind::any_text:
    case TargetKind::text_type: return DetectionQuery::texts();
    case TargetKind::property: break;
  }
  throw InterpreterError("property \"" + t.name + "\" cannot be detected directly");
}

inline std::optional<TextKind> text_kind_of(const Target& t, const Registry& r) {
  if (t.kind != TargetKind::text_type) return std::nullopt;
  const auto* spec = r.find(t.name);
  if (!spec) throw InterpreterError("unknown text type \"" + t.name + "\"");
  auto kind = text_kind_from_id(spec->backend_id);
  if (!kind) throw InterpreterError("text type \"" + t.name + "\" has no recognizer \"" + spec->backend_id + "\"");
  return kind;
}

inline void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

inline bool in_path(const PartialMatch& p, const std::string& id) {
  return std::any_of(p.path.begin(), p.path.end(), [&](const Detection* d) { return d->id == id; });
}

}  // namespace detail

/// Runs one chain, outermost item first, narrowing each level to detections
/// mostly contained in a match of the level above.
inline ChainResult run_chain(const FindChain& chain, const SceneFrame& frame, const DetectorBackend& backend,
                             const Registry& r) {
  const auto& items = chain.items;
  const std::size_t n = items.size();
  if (n == 0) throw InterpreterError("empty chain");
  for (std::size_t i = 1; i < n; ++i)
    if (items[i].target.is_property())
      throw InterpreterError("property \"" + items[i].target.name + "\" must be the innermost item");
  if (items[0].target.is_property() && n < 2)
    throw InterpreterError("property \"" + items[0].target.name + "\" needs a parent item");

  ChainResult result;
  std::vector<PartialMatch> frontier{PartialMatch{}};

  for (std::size_t level = 0; level < n; ++level) {
    const Item& item = items[n - 1 - level];
    const bool innermost = level + 1 == n;

    if (item.target.is_property()) {
      result.matches = eval_property(item.target, frontier, r);
      return result;
    }

    const DetectionQuery query = detail::query_for(item.target, r);
    const auto text_kind = detail::text_kind_of(item.target, r);
    std::vector<PartialMatch> next;
    std::vector<std::string> backups;
    std::size_t before_adjective = 0;
    std::optional<std::string> observed;

    for (const auto& parent : frontier) {
      const BBox region = parent.bbox(frame);
      std::vector<Detection> found;
      try {
        found = backend.detect(frame, region, query);
      } catch (const std::exception& e) {
        throw InterpreterError("detector failed at level " + std::to_string(level) + " (" + item.target.name +
                               "): " + e.what());
      }
      std::vector<Detection> candidates;
      for (auto& d : found) {
        if (detail::in_path(parent, d.id)) continue;
        if (text_kind && recognize(*text_kind, d.label).empty()) {
          if (innermost) detail::push_unique(backups, d.label);
          continue;
        }
        candidates.push_back(std::move(d));
      }
      if (item.adjective && !candidates.empty()) {
        before_adjective += candidates.size();
        if (!observed) observed = observed_adjective(*item.adjective, candidates.front(), region, r);
        candidates = apply_adjective(*item.adjective, candidates, region, frame, r, &result.missing_color_data);
      }
      for (const auto& d : candidates) {
        const Detection* stored = frame.find(d.id);
        if (!stored) throw InterpreterError("detector returned unknown detection \"" + d.id + "\"");
        PartialMatch m = parent;
        m.path.push_back(stored);
        next.push_back(std::move(m));
      }
    }

    if (next.empty()) {
      result.failure_depth = level;
      for (const auto& p : frontier)
        if (!p.path.empty()) detail::push_unique(result.partial_labels, p.path.back()->label);
      if (item.adjective && before_adjective > 0)
        result.adjective_miss = AdjectiveMiss{level, item.adjective->name, observed};
      result.backup_texts = std::move(backups);
      return result;
    }
    frontier = std::move(next);
  }

  const Item& inner = items.front();
  const auto text_kind = detail::text_kind_of(inner.target, r);
  for (const auto& m : frontier) {
    const Detection& d = *m.path.back();
    std::string value = d.label;
    if (text_kind) {
      std::vector<std::string> parts;
      for (const auto& tm : recognize(*text_kind, d.label)) parts.push_back(tm.value);
      value = text::join(parts, " ");
    }
    result.matches.push_back({m.ids(), std::move(value)});
  }
  return result;
}

struct RenderOptions {
  /// Drop the "on <parent>, <position>" clauses ("Found date, JAN 10 2024").
  bool brief = false;
};

struct RunResult {
  std::vector<ChainResult> chains;
  std::string rendered;
};

inline std::string item_noun(const Item& it) {
  switch (it.target.kind) {
    case TargetKind::any_object: return "object";
    case TargetKind::any_text: return "text";
    default: return it.target.name;
  }
}

namespace detail {

inline std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = text::ascii_lower(s[0]);
  return s;
}

inline std::string success_segment(const FindChain& chain, const ExecutionMatch& m, const SceneFrame& f,
                                   RenderOptions opts) {
  const Item& inner = chain.items.front();
  const std::string noun = item_noun(inner);
  const bool is_count = inner.target.is_property() && inner.target.name == kCountProperty;
  const bool is_color = inner.target.is_property() && inner.target.name == kColorProperty;
  const std::string counted = is_count ? item_noun(chain.items[1]) : std::string{};

  // detection the value belongs to, and its container
  const Detection* self = nullptr;
  const Detection* parent = nullptr;
  if (is_count) {
    if (!m.path.empty()) parent = f.find(m.path.back());
  } else if (is_color) {
    parent = f.find(m.path.back());
  } else {
    self = f.find(m.path.back());
    if (m.path.size() >= 2) parent = f.find(m.path[m.path.size() - 2]);
  }

  std::string phrase;
  if (is_count) {
    phrase = m.value + " " + counted + (m.value == "1" ? "" : "s");
  } else if (is_color) {
    phrase = opts.brief ? "color, " + m.value : "color " + m.value;
  } else if (inner.target.is_textual()) {
    phrase = opts.brief ? noun + ", " + m.value : noun + " " + m.value;
  } else {
    phrase = m.value;
  }
  std::string out = "Found " + phrase;
  if (opts.brief) return out;
  if (parent) {
    out += " on " + parent->label + ", " + frame_position_phrase(parent->bbox, f.width);
  } else if (self) {
    out += ", " + frame_position_phrase(self->bbox, f.width);
  }
  return out;
}

inline std::string failure_message(const FindChain& chain, const ChainResult& res) {
  const std::size_t n = chain.items.size();
  const std::size_t depth = *res.failure_depth;
  const Item& failed = chain.items[n - 1 - depth];
  const std::string noun = item_noun(failed);
  if (depth == 0) {
    if (res.adjective_miss) {
      const auto& miss = *res.adjective_miss;
      const std::string seen = miss.observed ? *miss.observed + " " + noun : noun;
      return "Found " + seen + ", no " + miss.requested + " " + noun + " visible";
    }
    return "No " + noun + " found";
  }
  std::string wanted = failed.adjective ? failed.adjective->name + " " + noun : noun;
  std::string out = "Found " + text::join(res.partial_labels, " and ") + ", no " + wanted;
  if (!res.backup_texts.empty()) out += "; text: " + text::join(res.backup_texts, ", ");
  return out;
}

}  // namespace detail

/// Spoken-style announcement for a run, one sentence per chain.
inline std::string render_messages(const std::vector<ChainResult>& results, const Program& p, const SceneFrame& f,
                                   RenderOptions opts = {}) {
  std::vector<std::string> sentences;
  for (std::size_t c = 0; c < results.size() && c < p.chains.size(); ++c) {
    const auto& res = results[c];
    const auto& chain = p.chains[c];
    if (res.found()) {
      std::string sentence;
      for (std::size_t i = 0; i < res.matches.size(); ++i) {
        auto seg = detail::success_segment(chain, res.matches[i], f, opts);
        sentence += i == 0 ? seg : ", " + detail::lower_first(seg);
      }
      sentences.push_back(std::move(sentence));
    } else {
      sentences.push_back(detail::failure_message(chain, res));
    }
  }
  return text::join(sentences, ". ") + ".";
}

/// Runs every chain against the frame; chains keep program order.
inline RunResult run_program(const Program& p, const SceneFrame& frame, const DetectorBackend& backend,
                             const Registry& r, RenderOptions opts = {}) {
  check_structure(p);
  RunResult out;
  for (const auto& c : p.chains) out.chains.push_back(run_chain(c, frame, backend, r));
  out.rendered = render_messages(out.chains, p, frame, opts);
  return out;
}

struct Announcement {
  std::string frame_id;
  std::string text;

  friend bool operator==(const Announcement&, const Announcement&) = default;
};

/// Runs a program over consecutive frames. A message is announced when it
/// changes; a repeated message is re-announced once it has been held back
/// `debounce_n` times in a row.
inline std::vector<Announcement> run_sequence(const Program& p, std::span<const SceneFrame> frames,
                                              const DetectorBackend& backend, const Registry& r,
                                              std::size_t debounce_n, RenderOptions opts = {}) {
  if (debounce_n < 1) throw std::invalid_argument("debounce_n must be at least 1");
  std::vector<Announcement> out;
  std::optional<std::string> last;
  std::size_t suppressed = 0;
  for (const auto& f : frames) {
    std::string msg;
    try {
      msg = run_program(p, f, backend, r, opts).rendered;
    } catch (const std::exception& e) {
      throw InterpreterError("frame " + f.frame_id + ": " + e.what());
    }
    if (last && *last == msg) {
      if (++suppressed < debounce_n) continue;
    }
    suppressed = 0;
    out.push_back({f.frame_id, msg});
    last = std::move(msg);
  }
  return out;
}

}  // namespace vizfilter
