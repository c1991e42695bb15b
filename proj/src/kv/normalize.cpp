#include "docex/kv/normalize.hpp"

#include <array>
#include <cstdio>
#include <optional>
#include <vector>

#include "docex/error.hpp"
#include "docex/util/text.hpp"

namespace docex::kv {

namespace {

[[noreturn]] void unparseable(std::string_view raw, std::string_view type) {
  throw Error(ErrorCode::UnparseableValue, "cannot read '" + std::string(raw) + "' as " + std::string(type));
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_currency_or_letter(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  switch (c) {
    case U'$': case U'\u20AC': case U'\u00A3': case U'\u00A5': case U'\u20B9': case U'\u00A2':
      return true;
    default:
      return false;
  }
}

bool is_blank(char32_t c) { return c == U' ' || c == U'\t' || c == U'\u00A0' || c == U'\n' || c == U'\r'; }

// Adds one unit in the last place of a decimal digit string; "999" -> "1000".
std::string increment(std::string digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] == '9') {
      digits[i] = '0';
    } else {
      ++digits[i];
      return digits;
    }
  }
  return "1" + digits;
}

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) return 29;
  return days[static_cast<std::size_t>(m - 1)];
}

std::optional<int> parse_int(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<int> month_from_name(std::string_view word) {
  static constexpr std::array<std::string_view, 12> names{"january", "february", "march",     "april",
                                                          "may",     "june",     "july",      "august",
                                                          "september", "october", "november", "december"};
  std::string w = util::casefold(word);
  while (!w.empty() && w.back() == '.') w.pop_back();
  if (w == "sept") return 9;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (w == names[i] || (w.size() == 3 && names[i].substr(0, 3) == w)) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

std::optional<int> day_from_word(std::string_view w) {
  for (std::string_view suffix : {"st", "nd", "rd", "th"}) {
    if (w.size() > suffix.size() && w.substr(w.size() - suffix.size()) == suffix) {
      w.remove_suffix(suffix.size());
      break;
    }
  }
  if (w.size() > 2) return std::nullopt;
  return parse_int(w);
}

std::optional<int> year_from(std::string_view s) {
  if (s.size() == 4) return parse_int(s);
  if (s.size() == 2) {
    auto v = parse_int(s);
    if (v) return 2000 + *v;
  }
  return std::nullopt;
}

std::string iso(int y, int m, int d, std::string_view raw) {
  if (y < 1 || y > 9999 || m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) unparseable(raw, "date");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return buf;
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  return util::strip_edge_punctuation(util::collapse_whitespace(util::casefold(raw)));
}

std::string normalize_money(std::string_view raw) {
  std::u32string cps = util::decode_utf8(raw);
  bool negative = false;
  std::size_t b = 0, e = cps.size();
  auto skip_edges = [&] {
    while (b < e && (is_blank(cps[b]) || is_currency_or_letter(cps[b]))) ++b;
    while (e > b && (is_blank(cps[e - 1]) || is_currency_or_letter(cps[e - 1]))) --e;
  };
  skip_edges();
  if (b < e && cps[b] == U'-') {
    negative = true;
    ++b;
    skip_edges();
  }
  std::string number;
  for (std::size_t i = b; i < e; ++i) {
    const char32_t c = cps[i];
    if (is_digit(c) || c == U'.') number.push_back(static_cast<char>(c));
    else if (c == U',' || is_blank(c)) continue;
    else unparseable(raw, "money");
  }
  const std::size_t dot = number.find('.');
  if (dot != std::string::npos && number.find('.', dot + 1) != std::string::npos) unparseable(raw, "money");
  std::string int_part = number.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : number.substr(dot + 1);
  if (int_part.empty() && frac.empty()) unparseable(raw, "money");
  if (int_part.empty()) int_part = "0";

  // round half up at the second decimal, on the digit string itself
  const bool round_up = frac.size() > 2 && frac[2] >= '5';
  frac.resize(2, '0');
  if (round_up) {
    std::string all = increment(int_part + frac);
    int_part = all.substr(0, all.size() - 2);
    frac = all.substr(all.size() - 2);
  }
  const std::size_t nz = int_part.find_first_not_of('0');
  int_part = nz == std::string::npos ? "0" : int_part.substr(nz);
  if (int_part == "0" && frac == "00") negative = false;
  return (negative ? "-" : "") + int_part + "." + frac;
}

std::string normalize_date(std::string_view raw, DateOrder order) {
  std::string s = util::trim(raw);
  while (!s.empty() && (s.back() == '.' || s.back() == ',')) s.pop_back();
  if (s.empty()) unparseable(raw, "date");

  // all-numeric: Y-M-D, D/M/Y or M/D/Y (separators / - .)
  const std::size_t sep_pos = s.find_first_of("/-.");
  if (sep_pos != std::string::npos && s.find_first_not_of("0123456789/-.") == std::string::npos) {
    const char sep = s[sep_pos];
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t p = s.find(sep, start);
      parts.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
      if (p == std::string::npos) break;
      start = p + 1;
    }
    if (parts.size() != 3) unparseable(raw, "date");
    for (const auto& p : parts) {
      if (p.empty() || p.size() > 4) unparseable(raw, "date");
    }
    if (parts[0].size() == 4) {
      if (parts[1].size() > 2 || parts[2].size() > 2) unparseable(raw, "date");
      return iso(*parse_int(parts[0]), *parse_int(parts[1]), *parse_int(parts[2]), raw);
    }
    auto y = year_from(parts[2]);
    if (!y || parts[0].size() > 2 || parts[1].size() > 2) unparseable(raw, "date");
    int a = *parse_int(parts[0]), b = *parse_int(parts[1]);
    return order == DateOrder::day_first ? iso(*y, b, a, raw) : iso(*y, a, b, raw);
  }

  // textual: "D Month YYYY" or "Month D, YYYY"
  std::string spaced;
  for (char c : s) spaced.push_back(c == ',' ? ' ' : c);
  std::vector<std::string> words = util::split_whitespace(spaced);
  if (words.size() == 3) {
    if (auto m = month_from_name(words[1])) {
      auto d = day_from_word(util::casefold(words[0]));
      auto y = words[2].size() == 4 ? parse_int(words[2]) : std::nullopt;
      if (d && y) return iso(*y, *m, *d, raw);
    }
    if (auto m = month_from_name(words[0])) {
      auto d = day_from_word(util::casefold(words[1]));
      auto y = words[2].size() == 4 ? parse_int(words[2]) : std::nullopt;
      if (d && y) return iso(*y, *m, *d, raw);
    }
  }
  unparseable(raw, "date");
}

std::string normalize_field(std::string_view raw, SemanticType type, DateOrder order) {
  if (util::trim(raw).empty()) unparseable(raw, to_string(type));
  switch (type) {
    case SemanticType::money:
      return normalize_money(raw);
    case SemanticType::date:
      return normalize_date(raw, order);
    case SemanticType::string:
    case SemanticType::address:
    case SemanticType::person_name: {
      std::string v = normalize_text(raw);
      if (v.empty()) unparseable(raw, to_string(type));
      return v;
    }
  }
  unparseable(raw, to_string(type));
}

Normalized normalize_or_flag(std::string_view raw, SemanticType type, DateOrder order) {
  try {
    return Normalized{normalize_field(raw, type, order), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnparseableValue) throw;
    return Normalized{util::casefold(raw), true};
  }
}

}  // namespace docex::kv
