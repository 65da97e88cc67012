#pragma once

// Randomized property checks shared by the unit suite and the acceptance
// binary. Each returns an empty string on success, else the first
// counterexample.

#include <random>
#include <sstream>
#include <string>

#include "support/oracle.hpp"
#include "support/random_scene.hpp"
#include "vizfilter/vizfilter.hpp"

namespace vztest {

inline std::string describe(const vizfilter::SceneFrame& f) {
  std::ostringstream os;
  os << f.frame_id << " " << f.width << "x" << f.height << ":";
  for (const auto& d : f.detections)
    os << " " << d.id << "(" << d.label << " " << d.bbox.x << "," << d.bbox.y << "," << d.bbox.w << ","
       << d.bbox.h << ")";
  return os.str();
}

/// run_chain against the brute-force oracle. Also fails when too few chains
/// match anything, so the comparison cannot pass by both sides being empty.
inline std::string check_oracle(unsigned seed, int frames, int programs_per_frame) {
  const auto& r = vizfilter::Registry::builtin();
  const vizfilter::FixtureBackend backend(r);
  Gen g(seed);
  int total = 0, nonempty = 0, deep = 0, adjective = 0;
  for (int i = 0; i < frames; ++i) {
    const auto f = g.frame(10);
    for (int k = 0; k < programs_per_frame; ++k) {
      const auto chain = g.chain_in(f, r, 3);
      const auto got = oracle::normalize(vizfilter::run_chain(chain, f, backend, r).matches);
      const auto want = oracle::run(chain, f);
      if (got != want) {
        std::ostringstream os;
        os << "chain `" << vizfilter::print_chain(chain) << "` on " << describe(f) << ": interpreter "
           << got.size() << " matches, oracle " << want.size();
        return os.str();
      }
      ++total;
      if (want.empty()) continue;
      ++nonempty;
      if (chain.items.size() == 3) ++deep;
      for (const auto& it : chain.items)
        if (it.adjective) {
          ++adjective;
          break;
        }
    }
  }
  if (nonempty * 3 < total || deep * 40 < total || adjective * 20 < total)
    return "weak coverage: " + std::to_string(nonempty) + "/" + std::to_string(total) + " chains matched, " +
           std::to_string(deep) + " at depth 3, " + std::to_string(adjective) + " with adjectives";
  return {};
}

/// Every non-root node is re-found by the program generated from it.
inline std::string check_synthesis(unsigned seed, int scenes) {
  const auto& r = vizfilter::Registry::builtin();
  const vizfilter::FixtureBackend backend(r);
  Gen g(seed);
  for (int i = 0; i < scenes; ++i) {
    auto f = g.frame(10);
    // hints only where the frame supports them: color attributes without
    // conflicting dominant colors, and the true cell within the parent
    const auto pre = vizfilter::build_scene_graph(f, r);
    for (std::size_t n = 0; n < f.detections.size(); ++n) {
      auto& d = f.detections[n];
      if (!d.dominant_colors.empty()) d.attributes.clear();
      if (g.chance(0.2)) {
        const auto& node = pre.nodes[*pre.index_of(d.id)];
        const auto parent_box = node.parent ? pre.nodes[*node.parent].bbox : f.bounds();
        try {
          d.attributes.insert(d.attributes.begin(), vizfilter::quadrant_label(d.bbox, parent_box));
        } catch (const vizfilter::GeometryError&) {
        }
      }
    }
    const auto graph = vizfilter::build_scene_graph(f, r);
    for (const auto& node : graph.nodes) {
      const auto p = vizfilter::generate_from_selection(graph, node.id);
      const auto res = vizfilter::run_chain(p.chains.front(), f, backend, r);
      bool hit = false;
      for (const auto& m : res.matches)
        if (!m.path.empty() && m.path.back() == node.id) hit = true;
      if (!hit)
        return "node " + node.id + " not re-found by `" + vizfilter::print_program(p) + "` on " + describe(f);
    }
  }
  return {};
}

/// Match sets and messages survive uniform scaling.
inline std::string check_scaling(unsigned seed, int frames) {
  const auto& r = vizfilter::Registry::builtin();
  const vizfilter::FixtureBackend backend(r);
  Gen g(seed);
  for (int i = 0; i < frames; ++i) {
    const auto f = g.frame(10);
    vizfilter::Program p;
    const int chains = g.uniform(1, 2);
    for (int c = 0; c < chains; ++c) p.chains.push_back(g.chain_in(f, r, 3));
    const auto base = vizfilter::run_program(p, f, backend, r);
    for (double s : {2.0, 10.0}) {
      const auto big = vizfilter::run_program(p, scaled(f, s), backend, r);
      bool same = big.rendered == base.rendered;
      for (std::size_t c = 0; same && c < p.chains.size(); ++c)
        same = oracle::normalize(big.chains[c].matches) == oracle::normalize(base.chains[c].matches);
      if (!same)
        return "x" + std::to_string(static_cast<int>(s)) + " changed `" + vizfilter::print_program(p) + "` on " +
               describe(f) + ": \"" + base.rendered + "\" vs \"" + big.rendered + "\"";
    }
  }
  return {};
}

/// parse(print(p)) == p and decode(encode(p)) == p.
inline std::string check_round_trips(unsigned seed, int programs) {
  const auto& r = vizfilter::Registry::builtin();
  Gen g(seed);
  for (int i = 0; i < programs; ++i) {
    const auto p = g.any_program(r);
    auto unnamed = p;
    unnamed.name.reset();
    const auto text = vizfilter::print_program(p);
    try {
      if (vizfilter::parse_program(text, r) != unnamed) return "text round-trip changed `" + text + "`";
      const auto j = vizfilter::encode_program(p);
      if (vizfilter::decode_program(j.dump(), r) != p) return "JSON round-trip changed " + j.dump();
    } catch (const std::exception& e) {
      return "`" + text + "`: " + e.what();
    }
  }
  return {};
}

// -- checksummed numbers built digit by digit --------------------------------

inline std::string make_luhn(std::mt19937& rng) {
  std::uniform_int_distribution<int> digit(0, 9), len(13, 19);
  const int n = len(rng);
  std::string s;
  for (int i = 0; i < n - 1; ++i) s += static_cast<char>('0' + digit(rng));
  if (s[0] == '0') s[0] = '4';
  int sum = 0;
  // check digit goes last; double every second digit from its left neighbour
  for (int i = static_cast<int>(s.size()) - 1, k = 0; i >= 0; --i, ++k) {
    int v = s[static_cast<std::size_t>(i)] - '0';
    if (k % 2 == 0) v = v * 2 > 9 ? v * 2 - 9 : v * 2;
    sum += v;
  }
  s += static_cast<char>('0' + (10 - sum % 10) % 10);
  return s;
}

inline std::string make_isbn13(std::mt19937& rng) {
  std::uniform_int_distribution<int> digit(0, 9);
  std::string s = std::bernoulli_distribution(0.5)(rng) ? "978" : "979";
  while (s.size() < 12) s += static_cast<char>('0' + digit(rng));
  int sum = 0;
  for (std::size_t i = 0; i < 12; ++i) sum += (s[i] - '0') * (i % 2 ? 3 : 1);
  s += static_cast<char>('0' + (10 - sum % 10) % 10);
  return s;
}

inline int mod97(const std::string& digits) {
  int m = 0;
  for (char c : digits) m = (m * 10 + (c - '0')) % 97;
  return m;
}

inline std::string make_iban(std::mt19937& rng) {
  static const char* countries[] = {"GB", "DE", "FR", "NL", "ES", "IT", "CH", "BE"};
  std::uniform_int_distribution<int> cidx(0, 7), len(11, 30), digit(0, 9), letter(0, 25), kind(0, 3);
  const std::string cc = countries[cidx(rng)];
  std::string bban;
  const int n = len(rng);
  for (int i = 0; i < n; ++i)
    bban += kind(rng) == 0 ? static_cast<char>('A' + letter(rng)) : static_cast<char>('0' + digit(rng));
  // rearranged form with check digits "00", expanded base 36
  std::string expanded;
  for (char c : bban + cc + "00") {
    if (c >= 'A' && c <= 'Z') expanded += std::to_string(c - 'A' + 10);
    else expanded += c;
  }
  const int check = 98 - mod97(expanded);
  std::string cd = std::to_string(check);
  if (cd.size() < 2) cd = "0" + cd;
  return cc + cd + bban;
}

/// Valid by construction, invalid after any single-digit change.
inline std::string check_checksums(unsigned seed, int per_kind) {
  using vizfilter::TextKind;
  std::mt19937 rng(seed);
  auto whole = [](TextKind k, const std::string& s) {
    const auto ms = vizfilter::recognize(k, s);
    return ms.size() == 1 && ms[0].start == 0 && ms[0].end == s.size();
  };
  struct Kind {
    TextKind kind;
    std::string (*make)(std::mt19937&);
  };
  const Kind kinds[] = {{TextKind::credit_card, make_luhn},
                        {TextKind::isbn, make_isbn13},
                        {TextKind::iban, make_iban}};
  for (const auto& k : kinds)
    for (int i = 0; i < per_kind; ++i) {
      const std::string s = k.make(rng);
      if (!whole(k.kind, s)) return std::string(vizfilter::text_kind_id(k.kind)) + " rejected valid " + s;
      for (std::size_t pos = 0; pos < s.size(); ++pos) {
        if (s[pos] < '0' || s[pos] > '9') continue;
        for (char c = '0'; c <= '9'; ++c) {
          if (c == s[pos]) continue;
          std::string m = s;
          m[pos] = c;
          if (!vizfilter::recognize(k.kind, m).empty())
            return std::string(vizfilter::text_kind_id(k.kind)) + " accepted mutation " + m + " of " + s;
        }
      }
    }
  return {};
}

}  // namespace vztest

namespace vztest {

/// Offline synthesis reproduces every worked example; every example answer
/// parses and survives the JSON codec. Follow-ups start from the answer to
/// the example before them.
inline std::string check_nl_golden() {
  using namespace vizfilter;
  const auto& r = Registry::builtin();
  std::optional<Program> previous;
  for (const auto& pair : kFewShotHistory) {
    const auto parsed = parse_nl_response(pair.assistant, r);
    const auto* expected = std::get_if<NLProgram>(&parsed);
    if (!expected) return "answer to \"" + std::string(pair.user) + "\" did not parse as a program";
    if (decode_program(encode_program(expected->program), r) != expected->program)
      return "answer to \"" + std::string(pair.user) + "\" changed through the JSON codec";
    const bool followup = text::starts_with(pair.user, kFollowupPrefix);
    const auto got = offline_synthesize(pair.user, followup ? previous : std::nullopt, r);
    const auto* program = std::get_if<NLProgram>(&got);
    if (!program) return "offline rules refused \"" + std::string(pair.user) + "\"";
    if (program->program != expected->program)
      return "\"" + std::string(pair.user) + "\": got `" + print_program(program->program) + "`, want `" +
             print_program(expected->program) + "`";
    previous = expected->program;
  }
  return {};
}

}  // namespace vztest
