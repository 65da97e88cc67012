#pragma once

// Textual program form:
//
//   program := chain ("," chain)*
//   chain   := "find" item ("on" item)*
//   item    := [adjective] target-name
//
// Keywords and names are case-insensitive; names may span several words and
// are matched longest-first against registry names and aliases.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vizfilter/program.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/suggest.hpp"
#include "vizfilter/text_util.hpp"

namespace vizfilter {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_target };

  ParseError(Kind kind, std::size_t offset, std::string token, std::vector<std::string> suggestions,
             const std::string& message)
      : std::runtime_error(message),
        kind_(kind),
        offset_(offset),
        token_(std::move(token)),
        suggestions_(std::move(suggestions)) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }
  const std::string& token() const { return token_; }
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  Kind kind_;
  std::size_t offset_;
  std::string token_;
  std::vector<std::string> suggestions_;
};

namespace detail {

struct Token {
  std::string text;  // lower-cased
  std::size_t offset;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (text::is_space(s[i])) {
      ++i;
    } else if (s[i] == ',') {
      out.push_back({",", i});
      ++i;
    } else {
      std::size_t start = i;
      while (i < s.size() && !text::is_space(s[i]) && s[i] != ',') ++i;
      out.push_back({text::to_lower(s.substr(start, i - start)), start});
    }
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view source, const Registry& r) : source_(source), reg_(r), toks_(tokenize(source)) {
    for (const auto& n : reg_.all_names()) max_target_words_ = std::max(max_target_words_, word_count(n));
  }

  Program parse() {
    if (toks_.empty()) syntax(0, "", "empty program");
    Program p;
    while (true) {
      p.chains.push_back(chain());
      if (pos_ == toks_.size()) break;
      if (toks_[pos_].text != ",") syntax_at(pos_, "expected \",\" or \"on\"");
      ++pos_;
      if (pos_ == toks_.size()) syntax(source_.size(), "", "expected \"find\" after \",\"");
    }
    return p;
  }

 private:
  static std::size_t word_count(std::string_view s) { return text::split_words(s).size(); }

  bool boundary(std::size_t i) const {
    return i >= toks_.size() || toks_[i].text == "," || toks_[i].text == "on";
  }

  [[noreturn]] void syntax(std::size_t offset, std::string token, const std::string& what) const {
    throw ParseError(ParseError::Kind::syntax, offset, std::move(token), {},
                     "syntax error at offset " + std::to_string(offset) + ": " + what);
  }

  [[noreturn]] void syntax_at(std::size_t i, const std::string& what) const {
    if (i >= toks_.size()) syntax(source_.size(), "", what);
    syntax(toks_[i].offset, toks_[i].text, what + ", found \"" + toks_[i].text + "\"");
  }

  std::string words(std::size_t from, std::size_t count) const {
    std::string out;
    for (std::size_t k = 0; k < count; ++k) {
      if (k > 0) out += ' ';
      out += toks_[from + k].text;
    }
    return out;
  }

  /// Longest run of words starting at `i` that `accept` recognizes, such that
  /// `next_ok` holds at the following position. Returns the word count or 0.
  template <typename Accept, typename NextOk>
  std::size_t longest(std::size_t i, std::size_t max_words, Accept accept, NextOk next_ok) const {
    std::size_t limit = 0;
    while (i + limit < toks_.size() && !boundary(i + limit) && limit < max_words) ++limit;
    for (std::size_t k = limit; k > 0; --k)
      if (accept(words(i, k)) && next_ok(i + k)) return k;
    return 0;
  }

  std::optional<Item> target_only(std::size_t i, std::size_t& used) const {
    used = longest(i, max_target_words_, [&](const std::string& w) { return reg_.find(w) != nullptr; },
                   [&](std::size_t j) { return boundary(j); });
    if (used == 0) return std::nullopt;
    return Item{std::nullopt, Registry::to_target(*reg_.find(words(i, used)))};
  }

  Item item() {
    if (boundary(pos_)) syntax_at(pos_, "expected an item");
    const std::size_t start = pos_;
    auto is_adj = [](const std::string& w) { return resolve_adjective(w).has_value(); };
    auto any = [](std::size_t) { return true; };

    // adjective followed by target
    for (std::size_t adj_words = longest(start, 3, is_adj, any); adj_words > 0; --adj_words) {
      if (!is_adj(words(start, adj_words))) continue;
      std::size_t used = 0;
      if (auto it = target_only(start + adj_words, used)) {
        it->adjective = resolve_adjective(words(start, adj_words));
        pos_ = start + adj_words + used;
        return *it;
      }
    }
    std::size_t used = 0;
    if (auto it = target_only(start, used)) {
      pos_ = start + used;
      return *it;
    }

    std::size_t end = start;
    while (!boundary(end)) ++end;
    std::size_t adj_words = longest(start, 3, is_adj, any);
    if (adj_words > 0 && start + adj_words < end) {
      std::size_t second = longest(start + adj_words, 3, is_adj, any);
      std::size_t inner = 0;
      if (second > 0 && target_only(start + adj_words + second, inner))
        syntax_at(start + adj_words, "only one adjective per item is allowed");
    }
    if (adj_words > 0 && start + adj_words == end)
      syntax(toks_[start].offset, words(start, adj_words),
             "adjective \"" + words(start, adj_words) + "\" needs a target");
    const std::size_t name_from = adj_words > 0 ? start + adj_words : start;
    const std::string name = words(name_from, end - name_from);
    auto suggestions = suggest_names(reg_, name, 2, 5);
    std::string msg = "unknown target \"" + name + "\" at offset " + std::to_string(toks_[name_from].offset);
    if (!suggestions.empty()) msg += " (did you mean: " + text::join(suggestions, ", ") + "?)";
    throw ParseError(ParseError::Kind::unknown_target, toks_[name_from].offset, name, std::move(suggestions), msg);
  }

  FindChain chain() {
    if (pos_ >= toks_.size() || toks_[pos_].text != "find") syntax_at(pos_, "expected \"find\"");
    ++pos_;
    FindChain c;
    c.items.push_back(item());
    while (pos_ < toks_.size() && toks_[pos_].text == "on") {
      ++pos_;
      c.items.push_back(item());
    }
    return c;
  }

  std::string_view source_;
  const Registry& reg_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t max_target_words_ = 1;
};

}  // namespace detail

inline Program parse_program(std::string_view source, const Registry& r) {
  return detail::Parser(source, r).parse();
}

inline std::string print_item(const Item& it) {
  std::string out;
  if (it.adjective) out = it.adjective->name + " ";
  return out + text::to_upper(it.target.name);
}

inline std::string print_chain(const FindChain& c) {
  std::string out = "find ";
  for (std::size_t i = 0; i < c.items.size(); ++i) {
    if (i > 0) out += " on ";
    out += print_item(c.items[i]);
  }
  return out;
}

/// Canonical text form; parse_program inverts it for registry-valid programs.
inline std::string print_program(const Program& p) {
  std::vector<std::string> chains;
  for (const auto& c : p.chains) chains.push_back(print_chain(c));
  return text::join(chains, ", ");
}

}  // namespace vizfilter
