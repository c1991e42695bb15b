#include <algorithm>
#include <optional>
#include <regex>

#include "docex/kv/extract.hpp"
#include "docex/util/text.hpp"

namespace docex::kv {

namespace {

struct DocLine {
  std::vector<std::string> words;
  std::string text;  // words joined by single spaces
};

std::vector<DocLine> collect_lines(const core::DocumentRecord& doc) {
  std::vector<DocLine> out;
  for (const core::Page& page : doc.pages) {
    for (const core::Block& block : page.blocks) {
      for (const core::Line& line : block.lines) {
        DocLine dl;
        for (const core::Word& w : line.words) dl.words.push_back(w.text);
        if (dl.words.empty()) continue;
        dl.text = util::join(dl.words, " ");
        out.push_back(std::move(dl));
      }
    }
  }
  return out;
}

std::string norm_word(std::string_view w) { return util::strip_edge_punctuation(util::casefold(w)); }

const std::vector<std::regex>& date_patterns() {
  static const std::string month =
      "(?:jan|feb|mar|apr|may|jun|jul|aug|sep|sept|oct|nov|dec)[a-z]*\\.?";
  static const std::vector<std::regex> patterns = {
      std::regex(R"((?:^|[^\d])(\d{4}[-/.]\d{1,2}[-/.]\d{1,2})(?![\d]))"),
      std::regex(R"((?:^|[^\d])(\d{1,2}[-/.]\d{1,2}[-/.](?:\d{4}|\d{2}))(?![\d]))"),
      std::regex("(?:^|[^\\d])(\\d{1,2}(?:st|nd|rd|th)?\\s+" + month + ",?\\s+\\d{4})(?![\\d])", std::regex::icase),
      std::regex("(?:^|[^a-z])(" + month + "\\s+\\d{1,2}(?:st|nd|rd|th)?,?\\s+\\d{4})(?![\\d])", std::regex::icase),
  };
  return patterns;
}

std::optional<std::string> find_date(const std::vector<DocLine>& lines, DateOrder order) {
  for (const DocLine& line : lines) {
    std::vector<std::pair<std::size_t, std::string>> found;
    for (const std::regex& re : date_patterns()) {
      for (auto it = std::sregex_iterator(line.text.begin(), line.text.end(), re); it != std::sregex_iterator();
           ++it) {
        found.emplace_back(static_cast<std::size_t>(it->position(1)), (*it)[1].str());
      }
    }
    std::sort(found.begin(), found.end());
    for (const auto& [pos, raw] : found) {
      try {
        normalize_date(raw, order);
        return raw;
      } catch (const Error&) {
        // not a calendar date; keep looking
      }
    }
  }
  return std::nullopt;
}

bool is_money_word(std::string_view w) {
  for (std::string_view prefix : {"$", "\xC2\xA3", "\xE2\x82\xAC", "RM", "rm"}) {
    if (w.substr(0, prefix.size()) == prefix) {
      w.remove_prefix(prefix.size());
      break;
    }
  }
  if (!w.empty() && w.front() == '-') w.remove_prefix(1);
  static const std::regex re(R"(^(?:\d{1,3}(?:,\d{3})+|\d+)\.\d{2}$)");
  return std::regex_match(w.begin(), w.end(), re);
}

bool is_money_keyword(const std::string& w) {
  const std::string n = norm_word(w);
  return n == "total" || n == "amount" || n == "balance" || n == "due";
}

std::optional<std::string> find_money(const std::vector<DocLine>& lines) {
  for (std::size_t li = lines.size(); li-- > 0;) {
    const auto& words = lines[li].words;
    std::optional<std::size_t> kw;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (is_money_keyword(words[i])) {
        kw = i;
        break;
      }
    }
    if (!kw) continue;
    // nearest amount on the keyword's line, ties to the right
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i == *kw || !is_money_word(words[i])) continue;
      const std::size_t dist = i > *kw ? i - *kw : *kw - i;
      const std::size_t best_dist = best ? (*best > *kw ? *best - *kw : *kw - *best) : SIZE_MAX;
      if (dist < best_dist || (dist == best_dist && i > *kw)) best = i;
    }
    if (best) return words[*best];
    if (li + 1 < lines.size()) {
      for (const std::string& w : lines[li + 1].words) {
        if (is_money_word(w)) return w;
      }
    }
  }
  return std::nullopt;
}

// `<field words>:` label, value to its right on the same line.
std::optional<std::string> find_label_value(const std::vector<DocLine>& lines, const std::string& field) {
  std::vector<std::string> label;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = field.find('_', start);
    label.push_back(field.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  for (const DocLine& line : lines) {
    const auto& words = line.words;
    for (std::size_t i = 0; i + label.size() <= words.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k + 1 < label.size() && ok; ++k) ok = util::casefold(words[i + k]) == label[k];
      if (!ok) continue;
      const std::string last = util::casefold(words[i + label.size() - 1]);
      std::size_t value_start = 0;
      if (last == label.back() + ":") {
        value_start = i + label.size();
      } else if (last == label.back() && i + label.size() < words.size() && words[i + label.size()] == ":") {
        value_start = i + label.size() + 1;
      } else {
        continue;
      }
      if (value_start >= words.size()) continue;
      return util::join(std::vector<std::string>(words.begin() + static_cast<std::ptrdiff_t>(value_start), words.end()),
                        " ");
    }
  }
  return std::nullopt;
}

}  // namespace

ExtractionResult rule_based_extract(const FieldSchema& schema, const core::DocumentRecord& doc, DateOrder order) {
  const std::vector<DocLine> lines = collect_lines(doc);
  ExtractionResult result = empty_result(schema);
  for (const FieldDef& def : schema.fields) {
    std::optional<std::string> raw;
    switch (def.type) {
      case SemanticType::date:
        raw = find_date(lines, order);
        break;
      case SemanticType::money:
        raw = find_money(lines);
        break;
      case SemanticType::string:
      case SemanticType::address:
      case SemanticType::person_name:
        raw = find_label_value(lines, def.name);
        break;
    }
    if (!raw) continue;
    FieldValue& fv = *result.find(def.name);
    const Normalized n = normalize_or_flag(*raw, def.type, order);
    fv.raw_value = *raw;
    fv.normalized_value = n.value;
    fv.unparseable = n.unparseable;
    fv.source = FieldSource::rule;
  }
  return result;
}

}  // namespace docex::kv
