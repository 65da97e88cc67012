#pragma once

// Local text-type recognizers. Number, time and date are plain patterns; the
// remaining kinds stand in for a cloud entity-extraction service and are
// deliberately conservative: checksummed kinds (ISBN, IBAN, card numbers) only
// match whole tokens that pass their checksum, and address detection is a
// keyword heuristic (house number followed by a street suffix).

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vizfilter/text_util.hpp"

namespace vizfilter {

enum class TextKind {
  number,
  time,
  date,
  address,
  email,
  flight_number,
  iban,
  isbn,
  money,
  credit_card,
  us_phone,
  tracking_number,
  url,
};

inline constexpr std::array<TextKind, 13> kAllTextKinds = {
    TextKind::number, TextKind::time,          TextKind::date,     TextKind::address, TextKind::email,
    TextKind::flight_number, TextKind::iban,   TextKind::isbn,     TextKind::money,   TextKind::credit_card,
    TextKind::us_phone, TextKind::tracking_number, TextKind::url};

/// Most specific first; used when labelling a string with a single type.
inline constexpr std::array<TextKind, 12> kSpecificityOrder = {
    TextKind::iban,     TextKind::credit_card, TextKind::isbn, TextKind::tracking_number,
    TextKind::flight_number, TextKind::us_phone, TextKind::email, TextKind::url,
    TextKind::money,    TextKind::date,        TextKind::time, TextKind::number};

inline std::string_view text_kind_id(TextKind k) {
  switch (k) {
    case TextKind::number: return "number";
    case TextKind::time: return "time";
    case TextKind::date: return "date";
    case TextKind::address: return "address";
    case TextKind::email: return "email";
    case TextKind::flight_number: return "flight_number";
    case TextKind::iban: return "iban";
    case TextKind::isbn: return "isbn";
    case TextKind::money: return "money";
    case TextKind::credit_card: return "credit_card";
    case TextKind::us_phone: return "us_phone";
    case TextKind::tracking_number: return "tracking_number";
    case TextKind::url: return "url";
  }
  return "";
}

inline std::optional<TextKind> text_kind_from_id(std::string_view id) {
  for (auto k : kAllTextKinds)
    if (text_kind_id(k) == id) return k;
  return std::nullopt;
}

struct TextMatch {
  TextKind kind;
  /// Matched text; separators removed for checksummed kinds.
  std::string value;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const TextMatch&, const TextMatch&) = default;
};

// -- checksums ---------------------------------------------------------------

inline bool luhn_valid(std::string_view digits) {
  int sum = 0;
  bool dbl = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (!text::is_digit(*it)) return false;
    int d = *it - '0';
    if (dbl) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    dbl = !dbl;
  }
  return !digits.empty() && sum % 10 == 0;
}

inline bool isbn10_valid(std::string_view s) {
  if (s.size() != 10) return false;
  int sum = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    int d;
    if (text::is_digit(s[i])) d = s[i] - '0';
    else if (i == 9 && (s[i] == 'X' || s[i] == 'x')) d = 10;
    else return false;
    sum += static_cast<int>(10 - i) * d;
  }
  return sum % 11 == 0;
}

inline bool isbn13_valid(std::string_view s) {
  if (s.size() != 13) return false;
  int sum = 0;
  for (std::size_t i = 0; i < 13; ++i) {
    if (!text::is_digit(s[i])) return false;
    sum += (s[i] - '0') * (i % 2 == 0 ? 1 : 3);
  }
  return sum % 10 == 0;
}

/// Remainder of the rearranged, letter-expanded IBAN modulo 97.
inline int iban_mod97(std::string_view s) {
  const std::string rotated = std::string(s.substr(4)) + std::string(s.substr(0, 4));
  int rem = 0;
  for (char c : rotated) {
    if (text::is_digit(c)) {
      rem = (rem * 10 + (c - '0')) % 97;
    } else {
      const int v = text::ascii_upper(c) - 'A' + 10;
      rem = (rem * 100 + v) % 97;
    }
  }
  return rem;
}

inline bool iban_valid(std::string_view s) {
  if (s.size() < 15 || s.size() > 34) return false;
  if (!text::is_alpha(s[0]) || !text::is_alpha(s[1]) || !text::is_digit(s[2]) || !text::is_digit(s[3]))
    return false;
  for (char c : s)
    if (!text::is_alnum(c)) return false;
  return iban_mod97(s) == 1;
}

namespace detail {

inline bool alnum_at(std::string_view s, std::size_t i) { return i < s.size() && text::is_alnum(s[i]); }
inline bool digit_at(std::string_view s, std::size_t i) { return i < s.size() && text::is_digit(s[i]); }
inline bool alnum_before(std::string_view s, std::size_t i) { return i > 0 && text::is_alnum(s[i - 1]); }
inline bool digit_before(std::string_view s, std::size_t i) { return i > 0 && text::is_digit(s[i - 1]); }

/// Repeated regex search; a candidate rejected by `accept` resumes the search
/// one byte later so valid matches starting inside it are not lost.
template <typename Accept>
std::vector<TextMatch> scan_regex(TextKind kind, std::string_view s, const std::regex& re, Accept accept) {
  std::vector<TextMatch> out;
  const std::string str(s);
  std::size_t pos = 0;
  std::smatch m;
  while (pos < str.size()) {
    auto begin = str.cbegin() + static_cast<std::ptrdiff_t>(pos);
    if (!std::regex_search(begin, str.cend(), m, re,
                           pos > 0 ? std::regex_constants::match_prev_avail : std::regex_constants::match_default))
      break;
    const std::size_t start = pos + static_cast<std::size_t>(m.position(0));
    const std::size_t len = static_cast<std::size_t>(m.length(0));
    if (len > 0 && accept(m, start, start + len)) {
      out.push_back({kind, str.substr(start, len), start, start + len});
      pos = start + len;
    } else {
      pos = start + 1;
    }
  }
  return out;
}

inline std::vector<TextMatch> recognize_number(std::string_view s) {
  std::vector<TextMatch> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!text::is_digit(s[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (digit_at(s, i)) ++i;
    if (i - start <= 3) {
      // thousands groups: ",ddd" not followed by a further digit
      while (i < s.size() && s[i] == ',' && digit_at(s, i + 1) && digit_at(s, i + 2) &&
             digit_at(s, i + 3) && !digit_at(s, i + 4))
        i += 4;
    }
    if (i + 1 < s.size() && s[i] == '.' && digit_at(s, i + 1)) {
      ++i;
      while (digit_at(s, i)) ++i;
    }
    out.push_back({TextKind::number, std::string(s.substr(start, i - start)), start, i});
  }
  return out;
}

inline std::vector<TextMatch> recognize_time(std::string_view s) {
  static const std::regex re(R"((\d{1,2}):([0-5]\d)(?::([0-5]\d))?(?:\s?([aApP])\.?[mM]\.?)?)");
  return scan_regex(TextKind::time, s, re, [&](const std::smatch& m, std::size_t b, std::size_t e) {
    if (digit_before(s, b) || (b > 0 && s[b - 1] == ':')) return false;
    if (alnum_at(s, e) || (e < s.size() && s[e] == ':')) return false;
    const int hour = std::stoi(m.str(1));
    if (m[4].matched) return hour >= 1 && hour <= 12;
    return hour <= 23;
  });
}

inline bool valid_month_day(int month, int day) { return month >= 1 && month <= 12 && day >= 1 && day <= 31; }

inline std::vector<TextMatch> recognize_date(std::string_view s) {
  static const std::regex re(
      R"(((?:jan|feb|mar|apr|may|jun|jul|aug|sep|oct|nov|dec)\.?\s+(\d{1,2}),?\s+(\d{4}))|((\d{4})-(\d{2})-(\d{2}))|((\d{1,2})/(\d{1,2})/(\d{4}|\d{2}))|((\d{1,2})/(\d{4})))",
      std::regex::icase);
  return scan_regex(TextKind::date, s, re, [&](const std::smatch& m, std::size_t b, std::size_t e) {
    if (alnum_before(s, b) || alnum_at(s, e)) return false;
    if (b > 0 && (s[b - 1] == '/' || s[b - 1] == '-')) return false;
    if (e < s.size() && (s[e] == '/' || s[e] == '-')) return false;
    if (m[1].matched) return valid_month_day(1, std::stoi(m.str(2)));
    if (m[4].matched) return valid_month_day(std::stoi(m.str(6)), std::stoi(m.str(7)));
    if (m[8].matched) return valid_month_day(std::stoi(m.str(9)), std::stoi(m.str(10)));
    const int month = std::stoi(m.str(12));
    return month >= 1 && month <= 12;
  });
}

inline std::vector<TextMatch> recognize_money(std::string_view s) {
  static const std::regex re(
      R"((?:\$|€|£)\s?\d{1,3}(?:,\d{3})+(?:\.\d{1,2})?|(?:\$|€|£)\s?\d+(?:\.\d{1,2})?|\d{1,3}(?:,\d{3})+(?:\.\d{1,2})?\s?(?:USD|EUR|GBP|CAD|AUD|JPY|CHF|CNY|INR|MXN)|\d+(?:\.\d{1,2})?\s?(?:USD|EUR|GBP|CAD|AUD|JPY|CHF|CNY|INR|MXN))");
  return scan_regex(TextKind::money, s, re, [&](const std::smatch&, std::size_t b, std::size_t e) {
    return !digit_before(s, b) && !alnum_at(s, e);
  });
}

inline std::vector<TextMatch> recognize_email(std::string_view s) {
  static const std::regex re(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})");
  return scan_regex(TextKind::email, s, re, [&](const std::smatch&, std::size_t b, std::size_t e) {
    if (b > 0 && (text::is_alnum(s[b - 1]) || s[b - 1] == '.')) return false;
    return !alnum_at(s, e);
  });
}

inline std::vector<TextMatch> recognize_url(std::string_view s) {
  static const std::regex re(
      R"((?:https?://|www\.)[^\s]+|[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.(?:com|org|net|edu|gov|io|co|us|uk|info|app|dev)(?:/[^\s]*)?)",
      std::regex::icase);
  std::vector<TextMatch> out;
  for (auto m : scan_regex(TextKind::url, s, re, [&](const std::smatch&, std::size_t b, std::size_t e) {
         if (b > 0 && (text::is_alnum(s[b - 1]) || s[b - 1] == '@' || s[b - 1] == '.')) return false;
         return !alnum_at(s, e) && !(e < s.size() && s[e] == '@');
       })) {
    while (!m.value.empty() && std::string_view(".,;:!?)\"'").find(m.value.back()) != std::string_view::npos) {
      m.value.pop_back();
      --m.end;
    }
    if (!m.value.empty()) out.push_back(std::move(m));
  }
  return out;
}

inline std::vector<TextMatch> recognize_us_phone(std::string_view s) {
  static const std::regex re(R"((?:\+?1[\s.-]?)?(?:\(\d{3}\)|\d{3})[\s.-]?\d{3}[\s.-]?\d{4})");
  return scan_regex(TextKind::us_phone, s, re, [&](const std::smatch&, std::size_t b, std::size_t e) {
    return !alnum_before(s, b) && !alnum_at(s, e) && !(b > 0 && s[b - 1] == '+');
  });
}

inline std::vector<TextMatch> recognize_flight_number(std::string_view s) {
  static const std::regex re(R"((?:[A-Z]{2}|[A-Z][0-9]|[0-9][A-Z])[0-9]{1,4})");
  return scan_regex(TextKind::flight_number, s, re, [&](const std::smatch&, std::size_t b, std::size_t e) {
    return !alnum_before(s, b) && !alnum_at(s, e);
  });
}

inline std::vector<TextMatch> recognize_tracking_number(std::string_view s) {
  static const std::regex re(R"(1Z[A-Z0-9]{16}|\d{20,22}|\d{15}|\d{12})");
  return scan_regex(TextKind::tracking_number, s, re, [&](const std::smatch&, std::size_t b, std::size_t e) {
    return !alnum_before(s, b) && !alnum_at(s, e);
  });
}

/// Alphanumeric tokens joined by single spaces or hyphens are grouped; the
/// longest window of whole tokens whose stripped form passes `valid` wins.
template <typename Valid>
std::vector<TextMatch> scan_grouped(TextKind kind, std::string_view s, std::size_t min_len, std::size_t max_len,
                                    Valid valid) {
  struct Tok {
    std::size_t b, e;
  };
  std::vector<TextMatch> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!text::is_alnum(s[i])) {
      ++i;
      continue;
    }
    // collect one group
    std::vector<Tok> toks;
    while (true) {
      const std::size_t b = i;
      while (alnum_at(s, i)) ++i;
      toks.push_back({b, i});
      if (i + 1 < s.size() && (s[i] == ' ' || s[i] == '-') && text::is_alnum(s[i + 1])) {
        ++i;
        continue;
      }
      break;
    }
    std::size_t t = 0;
    while (t < toks.size()) {
      std::optional<std::size_t> best_end;
      std::string best_value;
      std::string acc;
      for (std::size_t u = t; u < toks.size(); ++u) {
        acc += s.substr(toks[u].b, toks[u].e - toks[u].b);
        if (acc.size() > max_len) break;
        if (acc.size() >= min_len && valid(acc)) {
          best_end = u;
          best_value = acc;
        }
      }
      if (best_end) {
        out.push_back({kind, text::to_upper(best_value), toks[t].b, toks[*best_end].e});
        t = *best_end + 1;
      } else {
        ++t;
      }
    }
  }
  return out;
}

inline std::vector<TextMatch> recognize_address(std::string_view s) {
  static constexpr std::array<std::string_view, 14> kSuffixes = {
      "st", "street", "ave", "avenue", "rd", "road", "blvd", "dr", "drive", "lane", "ln", "way", "ct", "court"};
  struct Word {
    std::size_t b, e;
  };
  std::vector<Word> words;
  for (std::size_t i = 0; i < s.size();) {
    if (text::is_space(s[i])) {
      ++i;
      continue;
    }
    const std::size_t b = i;
    while (i < s.size() && !text::is_space(s[i])) ++i;
    std::size_t e = i;
    while (e > b && (s[e - 1] == '.' || s[e - 1] == ',')) --e;
    if (e > b) words.push_back({b, e});
  }
  std::vector<TextMatch> out;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto tok = s.substr(words[w].b, words[w].e - words[w].b);
    if (!std::all_of(tok.begin(), tok.end(), text::is_digit)) continue;
    for (std::size_t j = w + 1; j < words.size() && j <= w + 4; ++j) {
      const auto cand = text::to_lower(s.substr(words[j].b, words[j].e - words[j].b));
      if (std::find(kSuffixes.begin(), kSuffixes.end(), cand) != kSuffixes.end()) {
        out.push_back({TextKind::address, std::string(s.substr(words[w].b, words[j].e - words[w].b)), words[w].b,
                       words[j].e});
        w = j;
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// All non-overlapping matches of `kind` in `s`, left to right.
inline std::vector<TextMatch> recognize(TextKind kind, std::string_view s) {
  switch (kind) {
    case TextKind::number: return detail::recognize_number(s);
    case TextKind::time: return detail::recognize_time(s);
    case TextKind::date: return detail::recognize_date(s);
    case TextKind::address: return detail::recognize_address(s);
    case TextKind::email: return detail::recognize_email(s);
    case TextKind::flight_number: return detail::recognize_flight_number(s);
    case TextKind::iban:
      return detail::scan_grouped(kind, s, 15, 34, [](const std::string& v) { return iban_valid(v); });
    case TextKind::isbn:
      return detail::scan_grouped(kind, s, 10, 13, [](const std::string& v) {
        return isbn10_valid(v) || isbn13_valid(v);
      });
    case TextKind::money: return detail::recognize_money(s);
    case TextKind::credit_card:
      return detail::scan_grouped(kind, s, 13, 19, [](const std::string& v) { return luhn_valid(v); });
    case TextKind::us_phone: return detail::recognize_us_phone(s);
    case TextKind::tracking_number: return detail::recognize_tracking_number(s);
    case TextKind::url: return detail::recognize_url(s);
  }
  return {};
}

class UnknownTextKind : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::vector<TextMatch> recognize(std::string_view kind_id, std::string_view s) {
  const auto kind = text_kind_from_id(kind_id);
  if (!kind) throw UnknownTextKind("unknown text kind \"" + std::string(kind_id) + "\"");
  return recognize(*kind, s);
}

/// Kinds with a match covering more than half of the trimmed string.
inline std::vector<TextKind> classify_text(std::string_view s) {
  const std::string_view t = text::trim(s);
  std::vector<TextKind> out;
  if (t.empty()) return out;
  for (auto k : kAllTextKinds) {
    for (const auto& m : recognize(k, t)) {
      if (2 * (m.end - m.start) > t.size()) {
        out.push_back(k);
        break;
      }
    }
  }
  return out;
}

/// The most specific kind classify_text finds, if any; addresses are never
/// chosen since the heuristic is too loose to label a node with.
inline std::optional<TextKind> most_specific(std::string_view s) {
  const auto kinds = classify_text(s);
  for (auto k : kSpecificityOrder)
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) return k;
  return std::nullopt;
}

}  // namespace vizfilter
