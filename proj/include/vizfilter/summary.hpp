#pragma once

#include <string>

#include "vizfilter/program.hpp"

namespace vizfilter {

/// Bare noun for a target: "object" / "text" for the generic targets.
inline std::string target_noun(const Target& t) {
  switch (t.kind) {
    case TargetKind::any_object: return "object";
    case TargetKind::any_text: return "text";
    default: return t.name;
  }
}

inline std::string item_phrase(const Item& it) {
  if (it.adjective) return it.adjective->name + " " + target_noun(it.target);
  return "any " + target_noun(it.target);
}

/// Plain-language reading of a program, e.g.
/// "Find any text on any license plate on any car. Then, find any color on any car."
inline std::string summarize(const Program& p) {
  std::string out;
  for (std::size_t c = 0; c < p.chains.size(); ++c) {
    out += c == 0 ? "Find " : ". Then, find ";
    const auto& items = p.chains[c].items;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out += " on ";
      out += item_phrase(items[i]);
    }
  }
  return out + ".";
}

}  // namespace vizfilter
