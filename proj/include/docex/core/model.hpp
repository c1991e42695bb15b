#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace docex::core {

enum class Unit { pixel, point };
enum class BlockKind { paragraph, table, header, unknown };
enum class Provenance { scanned, digital };

std::string_view to_string(Unit u) noexcept;
std::string_view to_string(BlockKind k) noexcept;
std::string_view to_string(Provenance p) noexcept;

/// Axis-aligned box, top-left origin, y grows downward.
struct BoundingBox {
  double x0 = 0;
  double y0 = 0;
  double x1 = 0;
  double y1 = 0;
  Unit unit = Unit::pixel;

  bool operator==(const BoundingBox&) const = default;
};

struct Word {
  std::string text;
  BoundingBox bbox;
  double confidence = 1.0;

  bool operator==(const Word&) const = default;
};

/// Words are kept sorted by (x0, x1); see sort_words().
struct Line {
  std::vector<Word> words;
  double baseline_y = 0;

  bool operator==(const Line&) const = default;
};

struct Block {
  std::vector<Line> lines;
  BlockKind kind = BlockKind::paragraph;

  bool operator==(const Block&) const = default;
};

struct Page {
  int index = 0;
  double width = 0;
  double height = 0;
  Unit unit = Unit::pixel;
  std::vector<Block> blocks;

  bool operator==(const Page&) const = default;
};

/// The pipeline's interchange value. Scanned and digital inputs both end up here.
struct DocumentRecord {
  std::string doc_id;
  std::string source_path;
  Provenance provenance = Provenance::scanned;
  std::optional<std::string> engine_name;
  std::vector<Page> pages;
  std::string pipeline_version;

  bool operator==(const DocumentRecord&) const = default;
};

inline constexpr std::string_view kPipelineVersion = "docex 0.1.0";

// Reading order within a line: ascending x0, then x1, then text. The text
// tiebreak makes the order total so sorting is insertion-order independent.
bool reading_order_less(const Word& a, const Word& b) noexcept;
void sort_words(Line& line);

/// Throws Error(InvariantViolation) naming the offending path.
void validate(const DocumentRecord& doc);

/// Canonical JSON: sorted keys, no insignificant whitespace, UTF-8.
std::string serialize_document(const DocumentRecord& doc);
DocumentRecord parse_document(std::string_view json_bytes);

/// Words joined by spaces, lines by newline, blocks (across pages) by a blank line.
std::string flatten_text(const DocumentRecord& doc);

/// All words on a page in reading order, with their flat indices matching
/// the word indices used by extraction spans.
std::vector<const Word*> page_words(const Page& page);

// Groups loose recognized words into lines and paragraph blocks by geometry.
// Used for engine output, which arrives as a flat word list.
Page assemble_page(std::vector<Word> words, int index, double width, double height, Unit unit);

}  // namespace docex::core
