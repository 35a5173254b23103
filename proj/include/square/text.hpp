#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace square::text {

inline std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::string collapse_whitespace(const std::string& s) {
  std::string out;
  bool in_ws = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_ws = true;
    } else {
      if (in_ws && !out.empty()) out.push_back(' ');
      in_ws = false;
      out.push_back(c);
    }
  }
  return out;
}

// Splits on any non-alphanumeric character. Tokens come back lowercased.
inline std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Light plural stemming, enough to line question words up with column names.
inline std::string stem(const std::string& w) {
  if (w.size() > 3 && w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 3 && w.ends_with("es") && !w.ends_with("ses")) return w.substr(0, w.size() - 1);
  if (w.size() > 2 && w.ends_with("s") && !w.ends_with("ss")) return w.substr(0, w.size() - 1);
  return w;
}

inline const std::set<std::string>& stopwords() {
  static const std::set<std::string> kWords = {
      "a",    "an",   "and",  "are",  "as",    "at",   "be",   "by",   "did",
      "do",   "does", "for",  "from", "had",   "has",  "have", "how",  "in",
      "is",   "it",   "its",  "me",   "of",    "on",   "or",   "per",  "tell",
      "that", "the",  "their","them", "there", "this", "to",   "was",  "were",
      "what", "when", "where","which","who",   "with", "many", "much"};
  return kWords;
}

inline bool is_stopword(const std::string& w) { return stopwords().count(w) > 0; }

inline bool is_all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// ---------------------------------------------------------------------------
// Numeric parsing
// ---------------------------------------------------------------------------

// Accepts plain decimals plus digit-grouped forms like "1,234.5". Grouping
// commas must form proper 3-digit groups or the string is not a number.
inline std::optional<double> parse_number(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  if (i >= s.size()) return std::nullopt;

  std::string digits;
  std::size_t int_start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == int_start) return std::nullopt;
  std::size_t first_group = i - int_start;
  digits = s.substr(int_start, first_group);
  if (i < s.size() && s[i] == ',') {
    if (first_group > 3) return std::nullopt;
    while (i < s.size() && s[i] == ',') {
      if (i + 3 >= s.size()) return std::nullopt;
      for (int k = 1; k <= 3; ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[i + k]))) return std::nullopt;
      }
      digits += s.substr(i + 1, 3);
      i += 4;
    }
  }
  std::string canonical = (s[0] == '+' || s[0] == '-') ? s.substr(0, 1) + digits : digits;
  if (i < s.size() && s[i] == '.') {
    canonical.push_back('.');
    ++i;
    std::size_t frac_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == frac_start) return std::nullopt;
    canonical += s.substr(frac_start, i - frac_start);
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    canonical.push_back('e');
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) canonical.push_back(s[i++]);
    std::size_t exp_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == exp_start) return std::nullopt;
    canonical += s.substr(exp_start, i - exp_start);
  }
  if (i != s.size()) return std::nullopt;
  try {
    return std::stod(canonical);
  } catch (...) {
    return std::nullopt;
  }
}

// True when the text parses as a number without fraction or exponent.
inline bool parses_as_integer(const std::string& raw) {
  std::string s = trim(raw);
  if (s.find('.') != std::string::npos) return false;
  if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) return false;
  return parse_number(s).has_value();
}

inline std::optional<bool> parse_boolean(const std::string& raw) {
  std::string s = to_lower(trim(raw));
  if (s == "true") return true;
  if (s == "false") return false;
  return std::nullopt;
}

// Recognizes YYYY-MM-DD, YYYY/MM/DD and MM/DD/YYYY; returns the ISO form.
inline std::optional<std::string> parse_date_iso(const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() != 10) return std::nullopt;
  auto digits_at = [&](std::initializer_list<int> idx) {
    return std::all_of(idx.begin(), idx.end(), [&](int i) {
      return std::isdigit(static_cast<unsigned char>(s[i])) != 0;
    });
  };
  auto valid = [](int m, int d) { return m >= 1 && m <= 12 && d >= 1 && d <= 31; };
  auto emit = [](int y, int m, int d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return std::string(buf);
  };
  if ((s[4] == '-' && s[7] == '-') || (s[4] == '/' && s[7] == '/')) {
    if (!digits_at({0, 1, 2, 3, 5, 6, 8, 9})) return std::nullopt;
    int y = std::stoi(s.substr(0, 4));
    int m = std::stoi(s.substr(5, 2));
    int d = std::stoi(s.substr(8, 2));
    if (valid(m, d)) return emit(y, m, d);
    return std::nullopt;
  }
  if (s[2] == '/' && s[5] == '/') {
    if (!digits_at({0, 1, 3, 4, 6, 7, 8, 9})) return std::nullopt;
    int m = std::stoi(s.substr(0, 2));
    int d = std::stoi(s.substr(3, 2));
    int y = std::stoi(s.substr(6, 4));
    if (valid(m, d)) return emit(y, m, d);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Year and unit lexicons
// ---------------------------------------------------------------------------

struct YearToken {
  int year = 0;
  bool fiscal = false;

  bool operator==(const YearToken&) const = default;
  auto operator<=>(const YearToken&) const = default;
};

constexpr int kYearMin = 1900;
constexpr int kYearMax = 2100;

// Year tokens inside free text: bare 4-digit years plus FY/CY-prefixed forms,
// e.g. "FY2023" -> {2023, fiscal}. Matches whole alphanumeric tokens only, so
// "1985.5" does not contribute a year from a text cell.
inline std::vector<YearToken> extract_year_tokens(const std::string& s) {
  std::vector<YearToken> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    std::string t = to_lower(cur);
    bool fiscal = false;
    std::string digits = t;
    if (t.size() == 6 && (t.rfind("fy", 0) == 0 || t.rfind("cy", 0) == 0)) {
      fiscal = t.rfind("fy", 0) == 0;
      digits = t.substr(2);
    }
    if (digits.size() == 4 && is_all_digits(digits)) {
      int y = std::stoi(digits);
      if (y >= kYearMin && y <= kYearMax) out.push_back({y, fiscal});
    }
    cur.clear();
  };
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

inline const std::vector<std::string>& unit_lexicon() {
  static const std::vector<std::string> kUnits = {
      "usd", "eur", "gbp", "jpy", "cny", "$", "€", "£", "¥", "%", "percent",
      "thousand", "thousands", "million", "millions", "billion", "billions",
      "trillion", "trillions"};
  return kUnits;
}

// Whether the text mentions a currency, magnitude word, or percent sign.
inline bool contains_unit_token(const std::string& s) {
  std::string lower = to_lower(s);
  for (const auto& u : unit_lexicon()) {
    if (u.size() == 1 || !std::isalpha(static_cast<unsigned char>(u[0]))) {
      if (lower.find(u) != std::string::npos) return true;
    }
  }
  for (const auto& tok : tokenize(lower)) {
    for (const auto& u : unit_lexicon()) {
      if (std::isalpha(static_cast<unsigned char>(u[0])) && tok == u) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

inline std::size_t whitespace_token_count(const std::string& s) {
  std::size_t n = 0;
  bool in_tok = false;
  for (char c : s) {
    bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!ws && !in_tok) ++n;
    in_tok = !ws;
  }
  return n;
}

// Token-count estimate used for the budget check when the backend reports no
// usage: whitespace tokens scaled by 1.3.
inline std::size_t estimate_tokens(const std::string& s) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(whitespace_token_count(s)) * 1.3));
}

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Numeric tokens of a string: maximal runs of [0-9.,] that contain a digit,
// trimmed of leading/trailing punctuation. Used for evidence fidelity checks
// and summary validation.
inline std::vector<std::string> numeric_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&]() {
    while (!cur.empty() && (cur.back() == '.' || cur.back() == ',')) cur.pop_back();
    while (!cur.empty() && (cur.front() == '.' || cur.front() == ',')) cur.erase(cur.begin());
    if (!cur.empty() && std::any_of(cur.begin(), cur.end(), [](unsigned char c) {
          return std::isdigit(c) != 0;
        })) {
      out.push_back(cur);
    }
    cur.clear();
  };
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',') {
      cur.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace square::text
