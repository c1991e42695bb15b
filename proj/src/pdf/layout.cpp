#include <algorithm>
#include <tuple>

#include "docex/pdf/text.hpp"
#include "docex/util/text.hpp"

namespace docex::pdf {

namespace {

struct Glyph {
  double y = 0;  // baseline, top-left origin
  double x = 0;
  double size = 0;
  char32_t cp = 0;
  double advance = 0;

  auto key() const { return std::tie(y, x, size, cp, advance); }
};

bool is_blank(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0x00A0;
}

struct PendingWord {
  std::u32string text;
  double x0 = 0, x1 = 0, size = 0;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

core::Page reconstruct_layout(const std::vector<GlyphRun>& runs, double page_width, double page_height,
                              int page_index) {
  core::Page page;
  page.index = page_index;
  page.width = page_width;
  page.height = page_height;
  page.unit = core::Unit::point;

  // Runs are exploded into glyphs and fully sorted, so the result does not
  // depend on the order runs arrived in.
  std::vector<Glyph> glyphs;
  for (const GlyphRun& run : runs) {
    const std::u32string cps = util::decode_utf8(run.text);
    double x = run.origin_x;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const double adv = i < run.glyph_advances.size() ? run.glyph_advances[i] : 0.0;
      glyphs.push_back(Glyph{page_height - run.origin_y, x, run.font_size, cps[i], adv});
      x += adv;
    }
  }
  std::sort(glyphs.begin(), glyphs.end(), [](const Glyph& a, const Glyph& b) { return a.key() < b.key(); });

  std::vector<std::vector<Glyph>> lines;
  for (const Glyph& g : glyphs) {
    if (!lines.empty()) {
      const Glyph& anchor = lines.back().front();
      if (g.y - anchor.y <= kLineTolerance * std::max(anchor.size, g.size)) {
        lines.back().push_back(g);
        continue;
      }
    }
    lines.push_back({g});
  }

  auto clamp_x = [&](double v) { return std::clamp(v, 0.0, page_width); };
  auto clamp_y = [&](double v) { return std::clamp(v, 0.0, page_height); };

  std::vector<core::Line> built;
  std::vector<double> heights;
  for (auto& lg : lines) {
    const double baseline = lg.front().y;
    std::sort(lg.begin(), lg.end(), [](const Glyph& a, const Glyph& b) {
      return std::tie(a.x, a.cp, a.advance, a.size, a.y) < std::tie(b.x, b.cp, b.advance, b.size, b.y);
    });
    double line_size = 0;
    std::vector<PendingWord> words;
    PendingWord cur;
    auto flush = [&] {
      if (!cur.text.empty()) words.push_back(cur);
      cur = PendingWord{};
    };
    for (const Glyph& g : lg) {
      line_size = std::max(line_size, g.size);
      if (is_blank(g.cp)) {
        flush();
        continue;
      }
      if (!cur.text.empty() && g.x - cur.x1 > kWordGap * g.size) flush();
      if (cur.text.empty()) cur.x0 = cur.x1 = g.x;
      cur.text.push_back(g.cp);
      cur.x0 = std::min(cur.x0, g.x);
      cur.x1 = std::max(cur.x1, g.x + std::max(g.advance, 0.0));
      cur.size = std::max(cur.size, g.size);
    }
    flush();
    if (words.empty()) continue;

    core::Line line;
    line.baseline_y = clamp_y(baseline);
    for (const PendingWord& pw : words) {
      core::Word w;
      w.text = util::encode_utf8(pw.text);
      w.bbox.unit = core::Unit::point;
      w.bbox.x0 = clamp_x(pw.x0);
      w.bbox.x1 = clamp_x(pw.x1);
      w.bbox.y0 = clamp_y(baseline - 0.8 * pw.size);
      w.bbox.y1 = clamp_y(baseline + 0.2 * pw.size);
      w.confidence = 1.0;
      line.words.push_back(std::move(w));
    }
    core::sort_words(line);
    built.push_back(std::move(line));
    heights.push_back(line_size);
  }

  const double med = median(heights);
  for (std::size_t i = 0; i < built.size(); ++i) {
    if (i == 0 || built[i].baseline_y - built[i - 1].baseline_y > kBlockGap * med) {
      page.blocks.push_back(core::Block{{}, core::BlockKind::paragraph});
    }
    page.blocks.back().lines.push_back(std::move(built[i]));
  }
  return page;
}

}  // namespace docex::pdf
