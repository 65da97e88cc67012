#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/program_json.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/text_util.hpp"
#include "vizfilter/validate.hpp"

namespace vizfilter {

inline constexpr std::string_view kFunctionName = "interpret_object_query";
inline constexpr std::string_view kSystemMessage =
    "Use the interpret_object_query function to interpret questions about objects.";
inline constexpr std::string_view kFollowupPrefix = "Modify the previous program: ";

struct FewShotPair {
  std::string_view user;
  std::string_view assistant;
};

/// Worked examples sent ahead of every question, in order. Follow-ups refer
/// to the pair just before them.
inline constexpr std::array<FewShotPair, 19> kFewShotHistory = {{
    {"What is the license plate number of this car?",
     R"({ "query": [ [ {"object": "any text"}, {"object": "license plate"}, {"object": "car"} ] ] })"},
    {"Modify the previous program: Also read out the color of the car",
     R"({ "query": [ [ {"object": "any text"}, {"object": "license plate"}, {"object": "car"} ], [ {"object": "color"}, {"object": "car"} ] ] })"},
    {"What is the license plate number of the black car?",
     R"({ "query": [ [ {"object": "any text"}, {"object": "license plate"}, {"descriptor": "black", "object": "car"} ] ] })"},
    {"Read the expiration date on these products.",
     R"({ "query": [ [ {"object": "date"}, {"object": "grocery product"} ] ] })"},
    {"Modify the previous program: Add the product names.",
     R"({ "query": [ [ {"object": "date"}, {"object": "grocery product"} ], [ {"descriptor": "largest", "object": "any text"}, {"object": "grocery product"} ] ] })"},
    {"What is the color of the text on the bus?",
     R"({ "query": [ [ {"object": "color"}, {"object": "any text"}, {"object": "bus"} ] ] })"},
    {"How many people are sitting on this bench?",
     R"({ "query": [ [ {"object": "count"}, {"object": "person"}, {"object": "bench"} ] ] })"},
    {"What is the orange text on this envelope?",
     R"({ "query": [ [ {"descriptor": "orange", "object": "any text"}, {"object": "envelope"} ] ] })"},
    {"What is the route of this bus?", R"({ "query": [ [ {"object": "number"}, {"object": "bus"} ] ] })"},
    {"Modify the previous program: Only for blue busses",
     R"({ "query": [ [ {"object": "number"}, {"descriptor": "blue", "object": "bus"} ] ] })"},
    {"What does this bottle say?",
     R"({ "query": [ [ {"object": "any text"}, {"object": "grocery item"} ] ] })"},
    {"Modify the previous program: Just say the biggest text",
     R"({ "query": [ [ {"descriptor": "largest", "object": "any text"}, {"object": "grocery item"} ] ] })"},
    {"What is the text in the middle of this envelope?",
     R"({ "query": [ [ {"object": "any text"}, {"descriptor": "center middle", "object": "envelope"} ] ] })"},
    {"Modify the previous program: What's in the top left?",
     R"({ "query": [ [ {"object": "any text"}, {"descriptor": "top left", "object": "any object"} ] ] })"},
    {"What tempurature is my oven set to?", R"({ "query": [ [ {"object": "number"}, {"object": "oven"} ] ] })"},
    {"What is my oven set to?", R"({ "query": [ [ {"object": "number"}, {"object": "oven"} ] ] })"},
    {"What is the time on my microwave?", R"({ "query": [ [ {"object": "time"}, {"object": "microwave"} ] ] })"},
    {"Is this table empty?", R"({ "query": [ [ {"object": "any object"}, {"object": "dining table"} ] ] })"},
    {"Modify the previous program: Are my keys here?",
     R"({ "query": [ [ {"object": "keys"}, {"object": "dining table"} ] ] })"},
}};

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// A function-calling chat request: function spec, system message, few-shot
/// history and the user's turn.
struct NLRequest {
  nlohmann::json function_spec;
  std::vector<ChatMessage> messages;  // system first, user turn last

  /// Chat-completions request body.
  nlohmann::json to_json(std::string_view model = "gpt-4") const {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    return {{"model", model},
            {"messages", std::move(msgs)},
            {"functions", nlohmann::json::array({function_spec})},
            {"function_call", {{"name", kFunctionName}}}};
  }

  const ChatMessage& user_turn() const { return messages.back(); }
};

inline nlohmann::json interpret_object_query_spec(const Registry& r) {
  if (r.empty()) throw std::invalid_argument("registry has no targets to offer the model");
  nlohmann::json item = {
      {"type", "object"},
      {"properties",
       {{"object", {{"type", "string"}, {"enum", r.canonical_names()}}},
        {"descriptor", {{"type", "string"}, {"enum", all_adjective_names()}}}}}};
  return {{"name", kFunctionName},
          {"description",
           "Interprets queries about specified objects, and optionally their attributes. Attributes must be "
           "paired with an object."},
          {"parameters",
           {{"type", "object"},
            {"properties",
             {{"query_items",
               {{"type", "array"},
                {"description",
                 "A list of object targets with an optional descriptor, from most to least specific. If no close "
                 "match is found, use 'any object'."},
                {"items", std::move(item)}}}}},
            {"required", {"query_items"}}}}};
}

/// Program in the assistant-turn form `{"query": [[...], ...]}`.
inline std::string program_to_query_json(const Program& p) {
  nlohmann::json chains = nlohmann::json::array();
  for (const auto& c : p.chains) chains.push_back(encode_chain(c));
  return nlohmann::json{{"query", std::move(chains)}}.dump();
}

inline NLRequest build_nl_request(std::string_view question, const std::optional<Program>& prior,
                                  const Registry& r) {
  if (text::trim(question).empty()) throw std::invalid_argument("question is empty");
  NLRequest req;
  req.function_spec = interpret_object_query_spec(r);
  req.messages.push_back({"system", std::string(kSystemMessage)});
  for (const auto& pair : kFewShotHistory) {
    req.messages.push_back({"user", std::string(pair.user)});
    req.messages.push_back({"assistant", std::string(pair.assistant)});
  }
  std::string q(text::trim(question));
  if (prior) {
    req.messages.push_back({"assistant", program_to_query_json(*prior)});
    if (!text::starts_with(q, kFollowupPrefix)) q = std::string(kFollowupPrefix) + q;
  }
  req.messages.push_back({"user", std::move(q)});
  return req;
}

// -- responses ---------------------------------------------------------------

struct NLProgram {
  Program program;
  /// Unsupported targets (and dropped unknown descriptors), for repair.
  ValidationReport report;
};

struct NLRefusal {
  std::string text;
};

struct NLParseFailure {
  std::string message;
};

using NLOutcome = std::variant<NLProgram, NLRefusal, NLParseFailure>;

/// Interprets an assistant payload: a `{"query": ...}` / `{"query_items": ...}`
/// object, or plain prose (a refusal).
inline NLOutcome parse_nl_response(std::string_view body, const Registry& r) {
  const std::string_view t = text::trim(body);
  if (t.empty()) return NLParseFailure{"empty response"};
  if (t.front() != '{' && t.front() != '[') return NLRefusal{std::string(t)};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(t);
  } catch (const nlohmann::json::parse_error& e) {
    return NLParseFailure{std::string("malformed JSON: ") + e.what()};
  }
  const nlohmann::json* query = nullptr;
  if (j.is_object()) {
    if (j.contains("query")) query = &j["query"];
    else if (j.contains("query_items")) query = &j["query_items"];
  }
  if (!query) return NLParseFailure{"response has no \"query\" or \"query_items\" field"};
  if (!query->is_array() || query->empty()) return NLParseFailure{"query must be a non-empty array"};

  std::vector<UnsupportedSlot> dropped;
  Program p;
  try {
    if (query->front().is_object()) {
      // flat item list: a single chain
      p.chains.push_back(detail::decode_chain(*query, r, 0, &dropped));
    } else {
      for (std::size_t c = 0; c < query->size(); ++c)
        p.chains.push_back(detail::decode_chain((*query)[c], r, c, &dropped));
    }
  } catch (const CodecError& e) {
    return NLParseFailure{e.what()};
  }
  NLProgram out{std::move(p), {}};
  out.report = validate_program(out.program, r);
  for (auto& d : dropped) out.report.unsupported_slots.push_back(std::move(d));
  return out;
}

/// Assistant payload inside a chat-completions response: function-call
/// arguments when present, else the message content.
inline std::string extract_assistant_payload(const nlohmann::json& response) {
  const auto& choices = response.at("choices");
  if (!choices.is_array() || choices.empty()) throw std::runtime_error("response has no choices");
  const auto& msg = choices.front().at("message");
  if (msg.contains("function_call") && msg["function_call"].is_object())
    return msg["function_call"].at("arguments").get<std::string>();
  if (msg.contains("tool_calls") && msg["tool_calls"].is_array() && !msg["tool_calls"].empty())
    return msg["tool_calls"].front().at("function").at("arguments").get<std::string>();
  if (msg.contains("content") && msg["content"].is_string()) return msg["content"].get<std::string>();
  throw std::runtime_error("response message has neither function_call nor content");
}

}  // namespace vizfilter
