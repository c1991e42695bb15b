#pragma once

#include <string>
#include <vector>

#include "docex/core/model.hpp"
#include "docex/preprocess/image.hpp"

namespace docex::preprocess {

struct TextLayout {
  int scale = 2;         // pixels per font dot
  int margin = 20;       // pixels around the text
  int line_pitch = 12;   // font dots between baselines
  int char_advance = 6;  // font dots per character cell
};

struct RenderedPage {
  RasterImage image;
  std::vector<core::Word> words;  // ground-truth boxes, pixel units, confidence 1.0
};

// Renders printable ASCII with an embedded 5x7 dot-matrix font, dark ink on
// white. Characters outside 0x20..0x7E render as '?'. Empty lines still
// advance the pen, which yields paragraph gaps.
RenderedPage render_text(const std::vector<std::string>& lines, const TextLayout& layout = {});

}  // namespace docex::preprocess
