#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "docex/eval/fields.hpp"

namespace docex::eval {

struct EngineRow {
  std::string engine;
  std::size_t docs = 0;
  std::size_t words = 0;  // reference words
  double cer = 0;
  double wer = 0;
  double word_accuracy = 0;
};

struct FieldRow {
  std::string field;
  Scores scores;
};

struct EvalReport {
  std::vector<EngineRow> engines;
  std::vector<FieldRow> fields;
  std::optional<Scores> micro;  // pooled over all fields; omitted when there are no field rows
};

/// Pooled character / word distances for one engine over many documents.
struct EngineTally {
  std::size_t docs = 0;
  std::size_t chars = 0;
  std::size_t char_errors = 0;
  std::size_t words = 0;
  std::size_t word_errors = 0;

  void add(std::string_view ref, std::string_view hyp);  // EmptyReference
  EngineRow row(std::string engine) const;
};

void add_field_rows(EvalReport& report, const FieldMatchCounts& counts);

enum class ReportFormat { csv, markdown };
enum class EngineOrder { by_name, by_word_accuracy };  // the latter descending, ties by name

struct EmitOptions {
  ReportFormat format = ReportFormat::csv;
  EngineOrder order = EngineOrder::by_name;
  bool layout_footer = true;
};

std::string emit_report(const EvalReport& report, const EmitOptions& options = {});

ReportFormat parse_report_format(std::string_view s);  // ConfigError

inline constexpr std::string_view kLayoutFooter = "layout identification: not scored (no metric defined)";

}  // namespace docex::eval
