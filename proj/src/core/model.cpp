#include "docex/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "docex/error.hpp"
#include "docex/util/text.hpp"

namespace docex::core {

std::string_view to_string(Unit u) noexcept { return u == Unit::pixel ? "pixel" : "point"; }

std::string_view to_string(BlockKind k) noexcept {
  switch (k) {
    case BlockKind::paragraph: return "paragraph";
    case BlockKind::table: return "table";
    case BlockKind::header: return "header";
    case BlockKind::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::scanned ? "scanned" : "digital";
}

bool reading_order_less(const Word& a, const Word& b) noexcept {
  return std::tie(a.bbox.x0, a.bbox.x1, a.text, a.bbox.y0, a.bbox.y1, a.confidence) <
         std::tie(b.bbox.x0, b.bbox.x1, b.text, b.bbox.y0, b.bbox.y1, b.confidence);
}

void sort_words(Line& line) { std::sort(line.words.begin(), line.words.end(), reading_order_less); }

namespace {

[[noreturn]] void violation(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::InvariantViolation, path + ": " + what);
}

bool valid_utf8(std::string_view s) { return util::encode_utf8(util::decode_utf8(s)) == s; }

}  // namespace

void validate(const DocumentRecord& doc) {
  for (std::size_t p = 0; p < doc.pages.size(); ++p) {
    const Page& page = doc.pages[p];
    const std::string ppath = "pages[" + std::to_string(p) + "]";
    if (page.index != static_cast<int>(p)) violation(ppath + ".index", "page indices must be contiguous from 0");
    if (!(page.width > 0) || !(page.height > 0)) violation(ppath, "page extents must be positive");
    for (std::size_t b = 0; b < page.blocks.size(); ++b) {
      const Block& block = page.blocks[b];
      const std::string bpath = ppath + ".blocks[" + std::to_string(b) + "]";
      for (std::size_t l = 0; l < block.lines.size(); ++l) {
        const Line& line = block.lines[l];
        const std::string lpath = bpath + ".lines[" + std::to_string(l) + "]";
        for (std::size_t w = 0; w < line.words.size(); ++w) {
          const Word& word = line.words[w];
          const std::string wpath = lpath + ".words[" + std::to_string(w) + "]";
          if (word.text.empty()) violation(wpath + ".text", "empty word");
          if (util::has_line_break(word.text)) violation(wpath + ".text", "line break inside word");
          if (!valid_utf8(word.text)) violation(wpath + ".text", "invalid UTF-8");
          if (!(word.confidence >= 0.0 && word.confidence <= 1.0)) {
            violation(wpath + ".confidence", "confidence outside [0,1]");
          }
          if (doc.provenance == Provenance::digital && word.confidence != 1.0) {
            violation(wpath + ".confidence", "digital words must have confidence 1.0");
          }
          const BoundingBox& bb = word.bbox;
          if (bb.unit != page.unit) violation(wpath + ".bbox.unit", "unit differs from page unit");
          if (!(bb.x0 >= 0 && bb.y0 >= 0)) violation(wpath + ".bbox", "negative coordinate");
          if (!(bb.x0 <= bb.x1 && bb.y0 <= bb.y1)) violation(wpath + ".bbox", "inverted box");
          if (bb.x1 > page.width || bb.y1 > page.height) violation(wpath + ".bbox", "box outside page");
          if (w > 0 && reading_order_less(word, line.words[w - 1])) {
            violation(wpath, "words not in reading order");
          }
        }
      }
    }
  }
}

std::string flatten_text(const DocumentRecord& doc) {
  std::vector<std::string> blocks;
  for (const Page& page : doc.pages) {
    for (const Block& block : page.blocks) {
      std::vector<std::string> lines;
      for (const Line& line : block.lines) {
        Line sorted = line;
        sort_words(sorted);
        std::vector<std::string> words;
        words.reserve(sorted.words.size());
        for (const Word& w : sorted.words) words.push_back(w.text);
        if (!words.empty()) lines.push_back(util::join(words, " "));
      }
      if (!lines.empty()) blocks.push_back(util::join(lines, "\n"));
    }
  }
  return util::join(blocks, "\n\n");
}

std::vector<const Word*> page_words(const Page& page) {
  std::vector<const Word*> out;
  for (const Block& block : page.blocks) {
    for (const Line& line : block.lines) {
      for (const Word& w : line.words) out.push_back(&w);
    }
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Page assemble_page(std::vector<Word> words, int index, double width, double height, Unit unit) {
  Page page;
  page.index = index;
  page.width = width;
  page.height = height;
  page.unit = unit;
  if (words.empty()) return page;

  auto center = [](const Word& w) { return 0.5 * (w.bbox.y0 + w.bbox.y1); };
  std::sort(words.begin(), words.end(), [&](const Word& a, const Word& b) {
    double ca = center(a);
    double cb = center(b);
    if (ca != cb) return ca < cb;
    return reading_order_less(a, b);
  });

  std::vector<double> heights;
  heights.reserve(words.size());
  for (const Word& w : words) heights.push_back(w.bbox.y1 - w.bbox.y0);
  const double line_tol = std::max(1.0, 0.5 * median(heights));

  std::vector<Line> lines;
  double anchor = 0;
  for (Word& w : words) {
    if (lines.empty() || std::abs(center(w) - anchor) > line_tol) {
      lines.emplace_back();
      anchor = center(w);
    }
    lines.back().words.push_back(std::move(w));
  }

  std::vector<double> line_heights;
  for (Line& line : lines) {
    sort_words(line);
    double top = line.words.front().bbox.y0;
    double bottom = line.words.front().bbox.y1;
    for (const Word& w : line.words) {
      top = std::min(top, w.bbox.y0);
      bottom = std::max(bottom, w.bbox.y1);
    }
    line.baseline_y = bottom;
    line_heights.push_back(bottom - top);
  }

  const double gap_limit = 1.8 * median(line_heights);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0 || lines[i].baseline_y - lines[i - 1].baseline_y > gap_limit) {
      page.blocks.push_back(Block{{}, BlockKind::paragraph});
    }
    page.blocks.back().lines.push_back(std::move(lines[i]));
  }
  return page;
}

}  // namespace docex::core
