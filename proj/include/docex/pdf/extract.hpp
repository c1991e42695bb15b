#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "docex/core/model.hpp"
#include "docex/pdf/text.hpp"

namespace docex::pdf {

struct PdfExtraction {
  std::vector<core::Page> pages;
  std::vector<std::vector<GlyphRun>> runs;  // per page
};

/// Throws UnsupportedFeature("no text-show operators") for image-only files,
/// which callers route to the scanned path.
PdfExtraction extract_pdf(std::string_view bytes);

core::DocumentRecord pdf_to_document(std::string_view bytes, std::string doc_id, std::string source_path);

/// Object table and glyph runs as pretty-printed JSON, for inspection.
std::string dump_pdf_debug(std::string_view bytes);

}  // namespace docex::pdf
