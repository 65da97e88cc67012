#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vizfilter/program.hpp"
#include "vizfilter/registry.hpp"

namespace vizfilter {

struct UnsupportedSlot {
  std::size_t chain = 0;
  std::size_t item = 0;
  std::string name;
  std::string reason;

  friend bool operator==(const UnsupportedSlot&, const UnsupportedSlot&) = default;
};

struct ValidationReport {
  std::vector<UnsupportedSlot> unsupported_slots;
  bool ok() const { return unsupported_slots.empty(); }
};

inline constexpr const char* kReasonUnknown = "not in registry";
inline constexpr const char* kReasonPropertyNeedsParent = "property needs a parent item";
inline constexpr const char* kReasonPropertyPosition = "property must be the innermost item";

inline ValidationReport validate_program(const Program& p, const Registry& r) {
  ValidationReport report;
  for (std::size_t c = 0; c < p.chains.size(); ++c) {
    const auto& items = p.chains[c].items;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const Target& t = items[i].target;
      const TargetSpec* spec = r.find(t.name);
      if (!spec || !(Registry::to_target(*spec) == t)) {
        report.unsupported_slots.push_back({c, i, t.name, kReasonUnknown});
        continue;
      }
      if (t.is_property()) {
        if (i != 0)
          report.unsupported_slots.push_back({c, i, t.name, kReasonPropertyPosition});
        else if (items.size() < 2)
          report.unsupported_slots.push_back({c, i, t.name, kReasonPropertyNeedsParent});
      }
    }
  }
  return report;
}

}  // namespace vizfilter
