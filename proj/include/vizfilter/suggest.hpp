#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vizfilter/registry.hpp"
#include "vizfilter/text_util.hpp"

namespace vizfilter {

/// Canonical registry names within `max_distance` edits of `name` (aliases
/// count as hits for their canonical entry), closest first, at most `limit`.
inline std::vector<std::string> suggest_names(const Registry& r, std::string_view name,
                                              std::size_t max_distance, std::size_t limit) {
  const std::string needle = text::normalize_name(name);
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& spec : r.targets()) {
    std::size_t best = text::edit_distance(needle, spec.name);
    for (const auto& a : spec.aliases) best = std::min(best, text::edit_distance(needle, a));
    if (best <= max_distance) scored.emplace_back(best, spec.name);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (const auto& [d, n] : scored) {
    if (out.size() >= limit) break;
    out.push_back(n);
  }
  return out;
}

}  // namespace vizfilter
