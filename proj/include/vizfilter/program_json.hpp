#pragma once

// Program file format:
//   {"name": "optional", "chains": [[{"descriptor": "black", "object": "car"}, ...], ...]}
// Items are innermost-first, matching the question-mode JSON.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/validate.hpp"

namespace vizfilter {

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json encode_item(const Item& it) {
  nlohmann::json j = nlohmann::json::object();
  if (it.adjective) j["descriptor"] = it.adjective->name;
  j["object"] = it.target.name;
  return j;
}

inline nlohmann::json encode_chain(const FindChain& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& it : c.items) arr.push_back(encode_item(it));
  return arr;
}

inline nlohmann::json encode_program(const Program& p) {
  nlohmann::json j = nlohmann::json::object();
  if (p.name) j["name"] = *p.name;
  j["chains"] = nlohmann::json::array();
  for (const auto& c : p.chains) j["chains"].push_back(encode_chain(c));
  return j;
}

namespace detail {

/// Decodes one item. Unknown descriptors throw unless `dropped` is given, in
/// which case the descriptor is dropped and recorded there.
inline Item decode_item(const nlohmann::json& j, const Registry& r, std::size_t chain, std::size_t index,
                        std::vector<UnsupportedSlot>* dropped) {
  const std::string where = "chains[" + std::to_string(chain) + "][" + std::to_string(index) + "]";
  if (!j.is_object()) throw CodecError(where + ": expected object");
  for (const auto& [key, value] : j.items())
    if (key != "object" && key != "descriptor") throw CodecError(where + ": unknown field \"" + key + "\"");
  if (!j.contains("object") || !j["object"].is_string())
    throw CodecError(where + ".object: expected string");
  Item it{std::nullopt, r.target_for(j["object"].get<std::string>())};
  if (j.contains("descriptor")) {
    if (!j["descriptor"].is_string()) throw CodecError(where + ".descriptor: expected string");
    const auto raw = j["descriptor"].get<std::string>();
    it.adjective = resolve_adjective(raw);
    if (!it.adjective) {
      if (!dropped) throw CodecError(where + ".descriptor: unknown adjective \"" + raw + "\"");
      dropped->push_back({chain, index, text::normalize_name(raw), "unknown adjective"});
    }
  }
  return it;
}

inline FindChain decode_chain(const nlohmann::json& j, const Registry& r, std::size_t chain,
                              std::vector<UnsupportedSlot>* dropped) {
  if (!j.is_array() || j.empty())
    throw CodecError("chains[" + std::to_string(chain) + "]: expected non-empty array");
  FindChain c;
  for (std::size_t i = 0; i < j.size(); ++i) c.items.push_back(decode_item(j[i], r, chain, i, dropped));
  return c;
}

}  // namespace detail

inline Program decode_program(const nlohmann::json& j, const Registry& r) {
  if (!j.is_object()) throw CodecError("program: expected object");
  for (const auto& [key, value] : j.items())
    if (key != "name" && key != "chains") throw CodecError("program: unknown field \"" + key + "\"");
  Program p;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw CodecError("name: expected string");
    p.name = j["name"].get<std::string>();
  }
  if (!j.contains("chains") || !j["chains"].is_array() || j["chains"].empty())
    throw CodecError("chains: expected non-empty array");
  for (std::size_t c = 0; c < j["chains"].size(); ++c)
    p.chains.push_back(detail::decode_chain(j["chains"][c], r, c, nullptr));
  return p;
}

inline Program decode_program(std::string_view text, const Registry& r) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CodecError(std::string("malformed JSON: ") + e.what());
  }
  return decode_program(j, r);
}
inline Program decode_program(const std::string& text, const Registry& r) {
  return decode_program(std::string_view(text), r);
}
inline Program decode_program(const char* text, const Registry& r) { return decode_program(std::string_view(text), r); }

}  // namespace vizfilter
