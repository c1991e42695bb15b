#include <algorithm>

#include "docex/kv/extract.hpp"
#include "docex/util/text.hpp"

namespace docex::kv {

namespace {

std::string norm(std::string_view w) { return util::strip_edge_punctuation(util::casefold(w)); }

std::vector<std::string> value_tokens(const std::string& raw) {
  std::vector<std::string> out;
  for (const std::string& t : util::split_whitespace(raw)) {
    std::string n = norm(t);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

struct Alignment {
  SourceSpan span;
  double confidence = 1.0;
};

std::optional<Alignment> align(const std::vector<std::string>& tokens, const core::DocumentRecord& doc) {
  if (tokens.empty()) return std::nullopt;
  for (const core::Page& page : doc.pages) {
    const std::vector<const core::Word*> words = core::page_words(page);
    std::vector<std::string> normed;
    normed.reserve(words.size());
    for (const core::Word* w : words) normed.push_back(norm(w->text));
    for (std::size_t i = 0; i + tokens.size() <= normed.size(); ++i) {
      if (!std::equal(tokens.begin(), tokens.end(), normed.begin() + static_cast<std::ptrdiff_t>(i))) continue;
      Alignment a;
      a.span.page = page.index;
      for (std::size_t k = 0; k < tokens.size(); ++k) {
        a.span.word_indices.push_back(static_cast<int>(i + k));
        a.confidence = std::min(a.confidence, words[i + k]->confidence);
      }
      return a;
    }
  }
  return std::nullopt;
}

}  // namespace

ExtractionResult annotate_confidence(ExtractionResult result, const core::DocumentRecord& doc) {
  for (auto& [name, fv] : result.fields) {
    fv.source_spans.clear();
    if (!fv.present() || !fv.raw_value) {
      fv.confidence = 0.0;
      continue;
    }
    if (auto a = align(value_tokens(*fv.raw_value), doc)) {
      fv.confidence = std::clamp(a->confidence, 0.0, 1.0);
      fv.source_spans.push_back(std::move(a->span));
    } else {
      fv.confidence = fv.source == FieldSource::model ? kUnalignedModelConfidence : kUnalignedRuleConfidence;
    }
  }
  return result;
}

}  // namespace docex::kv
