#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docex/kv/schema.hpp"

namespace docex::kv {

enum class FieldSource { model, rule, absent };

std::string_view to_string(FieldSource s) noexcept;
FieldSource parse_field_source(std::string_view s);  // SchemaViolation

struct SourceSpan {
  int page = 0;
  std::vector<int> word_indices;  // indices into core::page_words(page)

  bool operator==(const SourceSpan&) const = default;
};

struct FieldValue {
  std::optional<std::string> raw_value;
  std::optional<std::string> normalized_value;
  double confidence = 0.0;
  FieldSource source = FieldSource::absent;
  std::vector<SourceSpan> source_spans;
  bool unparseable = false;  // normalization failed; normalized_value is the casefolded raw

  bool present() const noexcept { return source != FieldSource::absent; }
  bool operator==(const FieldValue&) const = default;
};

struct ExtractionEvent {
  std::string kind;  // e.g. "model_error", "repair_failed", "rule_fallback"
  std::string detail;

  bool operator==(const ExtractionEvent&) const = default;
};

struct ExtractionResult {
  std::string schema_name;
  std::vector<std::pair<std::string, FieldValue>> fields;  // schema order
  std::vector<ExtractionEvent> events;

  const FieldValue* find(std::string_view name) const noexcept;
  FieldValue* find(std::string_view name) noexcept;
  bool operator==(const ExtractionResult&) const = default;
};

/// Every schema field present exactly once, in schema order, with consistent
/// absent/confidence state. Throws SchemaViolation.
void validate_result(const ExtractionResult& result, const FieldSchema& schema);
bool is_schema_complete(const ExtractionResult& result, const FieldSchema& schema) noexcept;

/// Result with every schema field absent.
ExtractionResult empty_result(const FieldSchema& schema);

/// Canonical `.kv.json` form (sorted keys, compact).
std::string serialize_result(const ExtractionResult& result, std::string_view doc_id);
ExtractionResult parse_result(std::string_view json);

}  // namespace docex::kv
