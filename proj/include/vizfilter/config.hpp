#pragma once

#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

namespace vizfilter {

inline constexpr const char* kEnvLibrary = "VIZFILTER_LIB";
inline constexpr const char* kEnvLlmUrl = "VIZFILTER_LLM_URL";
inline constexpr const char* kEnvLlmToken = "VIZFILTER_LLM_TOKEN";

struct Config {
  /// Empty means the compiled-in registry.
  std::optional<std::filesystem::path> registry_path;
  std::filesystem::path library_path;
  std::string llm_url;
  std::string llm_token;
  std::size_t debounce_n = 5;
  bool brief = false;
};

inline std::optional<std::string> env(const char* name) {
  if (const char* v = std::getenv(name); v && *v) return std::string(v);
  return std::nullopt;
}

/// $XDG_CONFIG_HOME/vizfilter/library, falling back to ~/.config and then the
/// working directory.
inline std::filesystem::path default_library_path() {
  if (auto xdg = env("XDG_CONFIG_HOME")) return std::filesystem::path(*xdg) / "vizfilter" / "library";
  if (auto home = env("HOME")) return std::filesystem::path(*home) / ".config" / "vizfilter" / "library";
  return std::filesystem::path(".vizfilter") / "library";
}

/// Defaults overlaid with the VIZFILTER_* environment variables.
inline Config config_from_environment() {
  Config c;
  c.library_path = env(kEnvLibrary).value_or(default_library_path().string());
  c.llm_url = env(kEnvLlmUrl).value_or("");
  c.llm_token = env(kEnvLlmToken).value_or("");
  return c;
}

}  // namespace vizfilter
