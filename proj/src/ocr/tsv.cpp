#include <charconv>
#include <cmath>
#include <string>

#include "docex/error.hpp"
#include "docex/ocr/engine.hpp"
#include "docex/util/text.hpp"

namespace docex::ocr {

namespace {

std::vector<std::string_view> split_tabs(std::string_view row) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i) {
    if (i == row.size() || row[i] == '\t') {
      out.push_back(row.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

bool parse_number(std::string_view s, double& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<core::Word> parse_engine_tsv(std::string_view text) {
  std::vector<core::Word> words;
  std::vector<std::string> rows = util::split_lines(text);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& row = rows[r];
    if (row.empty()) continue;
    const std::string where = "row " + std::to_string(r + 1);
    auto cols = split_tabs(row);
    double first = 0;
    if (r == 0 && !parse_number(cols[0], first)) continue;  // header row
    if (cols.size() != 12) {
      throw Error(ErrorCode::TsvMalformed,
                  where + ": expected 12 columns, got " + std::to_string(cols.size()));
    }
    double nums[11];
    for (int c = 0; c < 11; ++c) {
      if (!parse_number(cols[c], nums[c])) {
        throw Error(ErrorCode::TsvMalformed, where + ": column " + std::to_string(c + 1) + " is not numeric");
      }
    }
    const double level = nums[0];
    const double conf = nums[10];
    if (level != 5 || conf < 0) continue;  // layout rows carry conf -1
    std::string word_text = util::trim(cols[11]);
    if (word_text.empty()) continue;
    const double left = nums[6], top = nums[7], width = nums[8], height = nums[9];
    if (width < 0 || height < 0) throw Error(ErrorCode::TsvMalformed, where + ": negative box extent");
    core::Word w;
    w.text = std::move(word_text);
    w.bbox = core::BoundingBox{left, top, left + width, top + height, core::Unit::pixel};
    w.confidence = conf / 100.0;
    words.push_back(std::move(w));
  }
  return words;
}

std::string render_engine_tsv(const std::vector<core::Word>& words) {
  std::string out = "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext\n";
  int n = 0;
  for (const core::Word& w : words) {
    ++n;
    out += "5\t1\t1\t1\t1\t" + std::to_string(n) + "\t" + format_number(w.bbox.x0) + "\t" +
           format_number(w.bbox.y0) + "\t" + format_number(w.bbox.x1 - w.bbox.x0) + "\t" +
           format_number(w.bbox.y1 - w.bbox.y0) + "\t" + format_number(w.confidence * 100.0) + "\t" +
           w.text + "\n";
  }
  return out;
}

}  // namespace docex::ocr
