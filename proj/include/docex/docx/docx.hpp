#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "docex/core/model.hpp"

namespace docex::docx {

/// Paragraph texts of word/document.xml in order. Table rows become one
/// paragraph each, cells joined by tabs. Empty paragraphs are kept.
std::vector<std::string> extract_docx(std::string_view bytes);

/// Lays paragraphs out on a single point-unit page with fixed metrics;
/// empty paragraphs start a new block.
core::DocumentRecord docx_to_document(const std::vector<std::string>& paragraphs, std::string doc_id,
                                      std::string source_path);

/// Minimal valid package holding the given paragraphs.
std::string make_docx(const std::vector<std::string>& paragraphs);

}  // namespace docex::docx
