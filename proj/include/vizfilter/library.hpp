#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vizfilter/program.hpp"
#include "vizfilter/program_json.hpp"
#include "vizfilter/registry.hpp"

namespace vizfilter {

class LibraryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LibraryEntry {
  std::string name;
  std::filesystem::path path;
  std::filesystem::file_time_type modified;
};

/// Saved programs, one JSON file per name in a directory.
class Library {
 public:
  explicit Library(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const { return dir_; }

  static bool valid_name(std::string_view name) {
    if (name.empty() || name.size() > 128 || name.front() == '.') return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
      return text::is_alnum(c) || c == '-' || c == '_' || c == '.' || c == ' ';
    });
  }

  std::filesystem::path path_for(std::string_view name) const {
    if (!valid_name(name))
      throw LibraryError("invalid program name \"" + std::string(name) +
                         "\" (letters, digits, space, '-', '_' and '.' only)");
    return dir_ / (std::string(name) + ".json");
  }

  bool contains(std::string_view name) const { return std::filesystem::exists(path_for(name)); }

  void save(std::string_view name, Program p, bool overwrite = false) const {
    const auto path = path_for(name);
    if (!overwrite && std::filesystem::exists(path))
      throw LibraryError("program \"" + std::string(name) + "\" already exists");
    std::filesystem::create_directories(dir_);
    p.name = std::string(name);
    std::ofstream out(path);
    if (!out) throw LibraryError("cannot write " + path.string());
    out << encode_program(p).dump(2) << '\n';
  }

  Program load(std::string_view name, const Registry& r) const {
    const auto path = path_for(name);
    std::ifstream in(path);
    if (!in) throw LibraryError("no program named \"" + std::string(name) + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      return decode_program(ss.str(), r);
    } catch (const CodecError& e) {
      throw LibraryError(path.string() + ": " + e.what());
    }
  }

  void remove(std::string_view name) const {
    if (!std::filesystem::remove(path_for(name)))
      throw LibraryError("no program named \"" + std::string(name) + "\"");
  }

  /// Entries sorted by name.
  std::vector<LibraryEntry> list() const {
    std::vector<LibraryEntry> out;
    if (!std::filesystem::is_directory(dir_)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir_)) {
      if (!e.is_regular_file() || e.path().extension() != ".json") continue;
      out.push_back({e.path().stem().string(), e.path(), e.last_write_time()});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return out;
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace vizfilter
