#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "vizfilter/nl_request.hpp"
#include "vizfilter/offline_synth.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/registry.hpp"

#ifdef VIZFILTER_WITH_HTTP
#include "httplib.h"
#endif

namespace vizfilter {

class LlmTransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sends a chat-completions request body and returns the raw response body.
class LlmTransport {
 public:
  virtual ~LlmTransport() = default;
  virtual std::string complete(const nlohmann::json& request) = 0;
};

/// File-name key for a recorded response: the user turn, slugified.
inline std::string replay_key(std::string_view user_turn) {
  std::string out;
  bool dash = false;
  for (char c : user_turn) {
    if (text::is_alnum(c)) {
      out += text::ascii_lower(c);
      dash = false;
    } else if (!out.empty() && !dash) {
      out += '-';
      dash = true;
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  if (out.size() > 96) out.resize(96);
  return out;
}

/// Answers from recorded responses: `<dir>/<replay_key(user turn)>.json`.
class ReplayTransport final : public LlmTransport {
 public:
  explicit ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::string complete(const nlohmann::json& request) override {
    const auto& msgs = request.at("messages");
    if (msgs.empty()) throw LlmTransportError("replay: request has no messages");
    const auto path = dir_ / (replay_key(msgs.back().at("content").get<std::string>()) + ".json");
    std::ifstream in(path);
    if (!in) throw LlmTransportError("replay: no recorded response at " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  std::filesystem::path dir_;
};

#ifdef VIZFILTER_WITH_HTTP

/// POSTs to a chat-completions endpoint. One attempt, no retries.
class HttpTransport final : public LlmTransport {
 public:
  HttpTransport(std::string url, std::string token, std::chrono::seconds timeout = std::chrono::seconds(30))
      : token_(std::move(token)), timeout_(timeout) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw LlmTransportError("endpoint URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    base_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  }

  std::string complete(const nlohmann::json& request) override {
    httplib::Client client(base_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    auto res = client.Post(path_, headers, request.dump(), "application/json");
    if (!res) throw LlmTransportError("request to " + base_ + path_ + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
      throw LlmTransportError("endpoint returned HTTP " + std::to_string(res->status));
    return res->body;
  }

 private:
  std::string base_;
  std::string path_;
  std::string token_;
  std::chrono::seconds timeout_;
};

#endif

/// Asks the model: builds the request, sends it, and interprets the reply.
inline NLOutcome ask_llm(std::string_view question, const std::optional<Program>& prior, const Registry& r,
                         LlmTransport& transport) {
  const NLRequest req = build_nl_request(question, prior, r);
  const std::string body = transport.complete(req.to_json());
  std::string payload;
  try {
    payload = extract_assistant_payload(nlohmann::json::parse(body));
  } catch (const std::exception& e) {
    return NLParseFailure{std::string("unexpected response shape: ") + e.what()};
  }
  return parse_nl_response(payload, r);
}

enum class SynthesisMode { offline, llm };

/// Edits `prior` with a follow-up question. The outcome restates the whole
/// program rather than a patch.
inline NLOutcome apply_followup(const Program& prior, std::string_view question, SynthesisMode mode,
                                const Registry& r, LlmTransport* transport = nullptr) {
  if (mode == SynthesisMode::offline) return offline_synthesize(question, prior, r);
  if (!transport) throw LlmTransportError("no model endpoint configured");
  return ask_llm(question, prior, r, *transport);
}

}  // namespace vizfilter
