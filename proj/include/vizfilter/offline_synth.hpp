#pragma once

// Rule-based question-to-program translation used when no language model is
// configured. It understands a fixed family of phrasings (the ones in the
// few-shot history and close variants) and refuses anything else.

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vizfilter/nl_request.hpp"
#include "vizfilter/program.hpp"
#include "vizfilter/registry.hpp"
#include "vizfilter/text_util.hpp"
#include "vizfilter/validate.hpp"

namespace vizfilter {

inline constexpr std::string_view kOfflineRefusal =
    "Sorry, I couldn't turn that into a program. Try naming what to look for and where, for example "
    "\"read the number on the bus\".";

namespace offline {

struct Normalized {
  std::string text;
  bool followup = false;
};

inline Normalized normalize_question(std::string_view q) {
  std::string s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const char c = q[i];
    if (text::is_alnum(c)) {
      s += text::ascii_lower(c);
    } else if (c == '\'') {
      s += '\'';
    } else if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < q.size() &&
               static_cast<unsigned char>(q[i + 1]) == 0x80 && static_cast<unsigned char>(q[i + 2]) == 0x99) {
      s += '\'';  // right single quotation mark
      i += 2;
    } else {
      s += ' ';
    }
  }
  Normalized out;
  auto words = text::split_words(s);
  auto drop_front = [&](std::size_t k) { words.erase(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(k)); };
  if (words.size() >= 4 && words[0] == "modify" && words[1] == "the" && words[2] == "previous" &&
      words[3] == "program") {
    drop_front(4);
    out.followup = true;
  }
  static const std::set<std::string> kFillers = {"actually", "please", "ok", "okay", "now", "and", "hey", "so"};
  while (!words.empty() && kFillers.count(words.front())) drop_front(1);
  std::vector<std::string> expanded;
  for (const auto& w : words) {
    if (w == "what's" || w == "whats") {
      expanded.push_back("what");
      expanded.push_back("is");
    } else if (w == "where's" || w == "wheres") {
      expanded.push_back("where");
      expanded.push_back("is");
    } else if (w == "don't") {
      expanded.push_back("dont");
    } else {
      expanded.push_back(w);
    }
  }
  out.text = text::join(expanded, " ");
  return out;
}

/// Phrases the question rules map differently from the registry, e.g. a
/// "bottle" is read as any grocery product since the detector confuses them.
inline std::optional<std::vector<Item>> lexicon(std::string_view phrase, const Registry& r) {
  auto t = [&](std::string_view name) { return r.target_for(name); };
  auto one = [&](std::string_view name) { return std::vector<Item>{Item{std::nullopt, t(name)}}; };
  static const std::map<std::string, int, std::less<>> kIds = {
      {"license plate number", 0}, {"plate number", 0},  {"licence plate number", 0},
      {"route", 1},                {"route number", 1},  {"bus number", 1},
      {"temperature", 1},          {"tempurature", 1},   {"setting", 1},
      {"route name", 2},           {"text", 2},          {"writing", 2},
      {"words", 2},                {"label", 2},         {"product name", 3},
      {"product names", 3},        {"product", 4},       {"products", 4},
      {"bottle", 4},               {"bottles", 4},       {"expiry date", 5},
      {"best before date", 5},     {"expiration dates", 5}};
  auto it = kIds.find(phrase);
  if (it == kIds.end()) return std::nullopt;
  switch (it->second) {
    case 0: return std::vector<Item>{{std::nullopt, Target::any_text()}, {std::nullopt, t("license plate")}};
    case 1: return one("number");
    case 2: return std::vector<Item>{{std::nullopt, Target::any_text()}};
    case 3:
      return std::vector<Item>{{Adjective{AdjectiveKind::size, "largest"}, Target::any_text()},
                               {std::nullopt, t("grocery product")}};
    case 4: return one("grocery product");
    case 5: return one("date");
  }
  return std::nullopt;
}

inline const std::set<std::string>& determiners() {
  static const std::set<std::string> d = {"the", "this", "these", "that", "those", "my", "a", "an",
                                          "our", "your", "some", "all", "any", "its"};
  return d;
}

inline const std::set<std::string>& prepositions() {
  static const std::set<std::string> p = {"of", "on", "in", "at", "inside", "from"};
  return p;
}

struct Segment {
  std::vector<Item> items;
  std::optional<Adjective> location_only;
  bool resolved = true;
};

inline std::optional<std::vector<Item>> resolve_noun(const std::vector<std::string>& words, const Registry& r) {
  if (words.empty()) return std::nullopt;
  const std::string phrase = text::join(words, " ");
  std::vector<std::string> forms{phrase};
  auto strip = [&](std::string_view suffix, std::string_view repl) {
    if (phrase.size() > suffix.size() + 1 && phrase.substr(phrase.size() - suffix.size()) == suffix)
      forms.push_back(phrase.substr(0, phrase.size() - suffix.size()) + std::string(repl));
  };
  strip("ies", "y");
  strip("ses", "");
  strip("es", "");
  strip("s", "");
  for (const auto& f : forms) {
    if (auto lex = lexicon(f, r)) return lex;
    if (const auto* spec = r.find(f)) return std::vector<Item>{{std::nullopt, Registry::to_target(*spec)}};
  }
  return std::nullopt;
}

/// One noun phrase: optional determiners, optional adjective, target.
inline std::optional<Segment> parse_segment(std::vector<std::string> words, const Registry& r, bool allow_unresolved) {
  while (!words.empty() && determiners().count(words.front())) words.erase(words.begin());
  if (words.empty()) return std::nullopt;
  if (auto items = resolve_noun(words, r)) return Segment{*items, std::nullopt, true};
  for (std::size_t k = std::min<std::size_t>(3, words.size()); k > 0; --k) {
    const std::vector<std::string> head(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(k));
    auto adj = resolve_adjective(text::join(head, " "));
    if (!adj) continue;
    const std::vector<std::string> rest(words.begin() + static_cast<std::ptrdiff_t>(k), words.end());
    if (rest.empty()) {
      if (adj->kind == AdjectiveKind::location) return Segment{{}, adj, true};
      continue;
    }
    if (auto items = resolve_noun(rest, r)) {
      items->front().adjective = adj;
      return Segment{*items, std::nullopt, true};
    }
  }
  if (allow_unresolved && words.size() <= 2 &&
      std::all_of(words.begin(), words.end(), [](const std::string& w) {
        return std::all_of(w.begin(), w.end(), text::is_alpha);
      }))
    return Segment{{Item{std::nullopt, Target::object(text::join(words, " "))}}, std::nullopt, false};
  return std::nullopt;
}

/// "X of/on/in Y ..." read innermost first. A bare location ("the middle")
/// qualifies the item after it, or any object when nothing follows.
inline std::optional<std::vector<Item>> parse_phrase(const std::vector<std::string>& words, const Registry& r) {
  std::vector<std::vector<std::string>> segments(1);
  for (const auto& w : words) {
    if (prepositions().count(w)) segments.emplace_back();
    else segments.back().push_back(w);
  }
  std::vector<Item> items;
  std::optional<Adjective> pending;
  bool first = true;
  for (const auto& seg_words : segments) {
    auto seg = parse_segment(seg_words, r, !first);
    if (!seg) {
      std::vector<std::string> stripped = seg_words;
      while (!stripped.empty() && determiners().count(stripped.front())) stripped.erase(stripped.begin());
      if (!stripped.empty()) return std::nullopt;  // words we could not place
      continue;
    }
    if (seg->location_only) {
      pending = seg->location_only;
      continue;
    }
    if (pending) {
      seg->items.front().adjective = pending;
      pending.reset();
    }
    for (auto& it : seg->items) items.push_back(std::move(it));
    first = false;
  }
  if (pending) items.push_back(Item{pending, Target::any_object()});
  if (items.empty()) return std::nullopt;
  return items;
}

inline std::vector<std::string> words_of(const std::string& s) { return text::split_words(s); }

inline std::optional<std::smatch> match(const std::string& s, const std::regex& re) {
  std::smatch m;
  if (std::regex_match(s, m, re)) return m;
  return std::nullopt;
}

inline Program single_chain(std::vector<Item> items) { return Program{{FindChain{std::move(items)}}, std::nullopt}; }

inline std::optional<std::vector<Item>> prefixed(Target first, const std::optional<std::vector<Item>>& rest) {
  if (!rest) return std::nullopt;
  std::vector<Item> out{Item{std::nullopt, std::move(first)}};
  out.insert(out.end(), rest->begin(), rest->end());
  return out;
}

/// Fresh questions.
inline std::optional<Program> fresh(const std::string& q, const Registry& r) {
  static const std::regex kHowMany(R"(^how many (.+)$)");
  static const std::regex kSay(R"(^what does (.+) say$)");
  static const std::regex kSetTo(R"(^what (?:[a-z]+ )?is (.+) set to$)");
  static const std::regex kEmpty(R"(^is (.+) empty$)");
  static const std::regex kWhere(R"(^where (?:is|are) (.+)$)");
  static const std::regex kIsOn(R"(^(?:is|are) (?:there )?(.+?) (?:on|in|at|inside) (.+)$)");
  static const std::regex kWhatColor(R"(^what colou?r is (.+)$)");
  static const std::regex kRead(R"(^(?:read|say|find|tell me|show me|give me)(?: out)? (.+)$)");
  static const std::regex kWhat(R"(^what (?:is|are) (.+)$)");

  if (auto m = match(q, kHowMany)) {
    static const std::set<std::string> kStops = {"are", "is", "were", "do", "does", "can", "there",
                                                 "on",  "in", "at",   "inside"};
    const auto w = words_of((*m)[1].str());
    std::size_t i = 0;
    std::vector<std::string> counted;
    while (i < w.size() && !kStops.count(w[i])) counted.push_back(w[i++]);
    while (i < w.size() && !prepositions().count(w[i])) ++i;
    auto seg = parse_segment(counted, r, false);
    if (!seg || seg->items.empty()) return std::nullopt;
    std::vector<Item> items{Item{std::nullopt, Target::count()}};
    items.insert(items.end(), seg->items.begin(), seg->items.end());
    if (i < w.size()) {
      auto rest = parse_phrase(std::vector<std::string>(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end()), r);
      if (!rest) return std::nullopt;
      items.insert(items.end(), rest->begin(), rest->end());
    }
    return single_chain(std::move(items));
  }
  if (auto m = match(q, kSay))
    if (auto items = prefixed(Target::any_text(), parse_phrase(words_of((*m)[1].str()), r)))
      return single_chain(std::move(*items));
  if (auto m = match(q, kSetTo))
    if (auto items = prefixed(r.target_for("number"), parse_phrase(words_of((*m)[1].str()), r)))
      return single_chain(std::move(*items));
  if (auto m = match(q, kEmpty))
    if (auto items = prefixed(Target::any_object(), parse_phrase(words_of((*m)[1].str()), r)))
      return single_chain(std::move(*items));
  if (auto m = match(q, kWhere))
    if (auto items = parse_phrase(words_of((*m)[1].str()), r)) return single_chain(std::move(*items));
  if (auto m = match(q, kIsOn)) {
    auto seg = parse_segment(words_of((*m)[1].str()), r, true);
    auto rest = parse_phrase(words_of((*m)[2].str()), r);
    if (seg && !seg->items.empty() && rest) {
      std::vector<Item> items = seg->items;
      items.insert(items.end(), rest->begin(), rest->end());
      return single_chain(std::move(items));
    }
  }
  if (auto m = match(q, kWhatColor))
    if (auto items = prefixed(Target::color(), parse_phrase(words_of((*m)[1].str()), r)))
      return single_chain(std::move(*items));
  if (auto m = match(q, kRead))
    if (auto items = parse_phrase(words_of((*m)[1].str()), r)) return single_chain(std::move(*items));
  if (auto m = match(q, kWhat))
    if (auto items = parse_phrase(words_of((*m)[1].str()), r)) return single_chain(std::move(*items));
  return std::nullopt;
}

inline std::string strip_read_verb(const std::string& s) {
  static const std::regex kVerb(R"(^(?:read|say|find|tell me|show me|give me|get)(?: out)? (.+)$)");
  if (auto m = match(s, kVerb)) return (*m)[1].str();
  return s;
}

/// Changes to an existing program. The result restates the whole program.
inline std::optional<Program> modify(const std::string& q, const Program& prior, const Registry& r) {
  static const std::regex kInstead(R"(^(.+) instead$)");
  static const std::regex kAlso(R"(^(?:also|add|plus)(?: also)? (.+)$)");
  static const std::regex kRemove(R"(^(?:remove|drop|forget|dont read|stop reading|no more)(?: the)? (.+)$)");
  static const std::regex kHere(R"(^(?:is|are) (.+) here$)");
  static const std::regex kWhereIn(R"(^what is (?:in|on|at) (.+)$)");
  static const std::regex kNarrow(R"(^(?:only|just)(?: for| on| say| read| show| me| the| out)* (.+)$)");

  if (auto m = match(q, kInstead)) {
    if (auto items = parse_phrase(words_of(strip_read_verb((*m)[1].str())), r)) {
      Program p = prior;
      auto& chain = p.chains.front().items;
      chain.erase(chain.begin());
      chain.insert(chain.begin(), items->begin(), items->end());
      return p;
    }
  }
  if (auto m = match(q, kAlso)) {
    if (auto items = parse_phrase(words_of(strip_read_verb((*m)[1].str())), r)) {
      Program p = prior;
      p.chains.push_back(FindChain{std::move(*items)});
      return p;
    }
  }
  if (auto m = match(q, kRemove)) {
    if (auto seg = parse_segment(words_of((*m)[1].str()), r, false); seg && !seg->items.empty()) {
      Program p = prior;
      const Target& drop = seg->items.front().target;
      std::erase_if(p.chains, [&](const FindChain& c) { return c.items.front().target == drop; });
      if (!p.chains.empty() && p.chains.size() < prior.chains.size()) return p;
    }
    return std::nullopt;
  }
  if (auto m = match(q, kHere)) {
    if (auto seg = parse_segment(words_of((*m)[1].str()), r, true); seg && !seg->items.empty()) {
      Program p = prior;
      auto& chain = p.chains.front().items;
      chain.erase(chain.begin());
      chain.insert(chain.begin(), seg->items.begin(), seg->items.end());
      return p;
    }
  }
  if (auto m = match(q, kWhereIn)) {
    auto seg = parse_segment(words_of((*m)[1].str()), r, false);
    if (seg && seg->location_only) {
      std::vector<Item> items{prior.chains.front().items.front(), Item{seg->location_only, Target::any_object()}};
      return single_chain(std::move(items));
    }
  }
  if (auto m = match(q, kNarrow)) {
    auto seg = parse_segment(words_of((*m)[1].str()), r, false);
    if (seg && seg->items.size() == 1 && seg->items.front().adjective) {
      const Item& want = seg->items.front();
      Program p = prior;
      bool hit = false;
      for (auto& c : p.chains)
        for (auto& it : c.items)
          if (it.target == want.target) {
            it.adjective = want.adjective;
            hit = true;
          }
      if (hit) return p;
    }
  }
  return std::nullopt;
}

}  // namespace offline

/// Deterministic stand-in for the language model. `prior` switches on the
/// follow-up rules (add, only, instead, remove, ...).
inline NLOutcome offline_synthesize(std::string_view question, const std::optional<Program>& prior,
                                    const Registry& r) {
  const auto norm = offline::normalize_question(question);
  std::optional<Program> p;
  if (prior && !prior->chains.empty()) p = offline::modify(norm.text, *prior, r);
  if (!p) p = offline::fresh(norm.text, r);
  if (!p) return NLRefusal{std::string(kOfflineRefusal)};
  NLProgram out{std::move(*p), {}};
  out.report = validate_program(out.program, r);
  return out;
}

}  // namespace vizfilter
