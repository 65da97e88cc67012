#pragma once

#include <string>
#include <vector>

#include "vizfilter/program.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/suggest.hpp"
#include "vizfilter/validate.hpp"

namespace vizfilter {

struct RepairResult {
  Program program;
  ValidationReport report;
  /// One list per unsupported slot, closest names first.
  std::vector<std::vector<std::string>> suggestions;
};

/// Reports unsupported slots with up to three replacement names within three
/// edits. The program is returned unchanged; the caller picks replacements.
inline RepairResult repair_program(const Program& p, const Registry& r) {
  RepairResult out{p, validate_program(p, r), {}};
  for (const auto& slot : out.report.unsupported_slots) {
    if (slot.reason == kReasonUnknown) out.suggestions.push_back(suggest_names(r, slot.name, 3, 3));
    else out.suggestions.emplace_back();
  }
  return out;
}

}  // namespace vizfilter
