#include "docex/eval/report.hpp"

#include <algorithm>
#include <cstdio>

#include "docex/error.hpp"
#include "docex/eval/metrics.hpp"

namespace docex::eval {

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

using Row = std::vector<std::string>;

void emit_table(std::string& out, const Row& header, const std::vector<Row>& rows, ReportFormat format) {
  auto line = [&](const Row& cells) {
    if (format == ReportFormat::csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    } else {
      out += "|";
      for (const std::string& c : cells) out += " " + c + " |";
    }
    out += "\n";
  };
  line(header);
  if (format == ReportFormat::markdown) line(Row(header.size(), "---"));
  for (const Row& r : rows) line(r);
}

}  // namespace

void EngineTally::add(std::string_view ref, std::string_view hyp) {
  const EditDistanceResult c = char_distance(ref, hyp);
  const EditDistanceResult w = word_distance(ref, hyp);
  ++docs;
  chars += c.ref_len;
  char_errors += c.distance;
  words += w.ref_len;
  word_errors += w.distance;
}

EngineRow EngineTally::row(std::string engine) const {
  EngineRow r;
  r.engine = std::move(engine);
  r.docs = docs;
  r.words = words;
  r.cer = ratio(char_errors, chars);
  r.wer = ratio(word_errors, words);
  r.word_accuracy = words == 0 ? 0.0 : word_accuracy(r.wer);
  return r;
}

void add_field_rows(EvalReport& report, const FieldMatchCounts& counts) {
  const F1Summary s = f1(counts);
  for (const auto& [name, scores] : s.per_field) report.fields.push_back({name, scores});
  if (!counts.empty()) report.micro = s.micro;
}

std::string emit_report(const EvalReport& report, const EmitOptions& options) {
  std::vector<EngineRow> engines = report.engines;
  if (options.order == EngineOrder::by_name) {
    std::stable_sort(engines.begin(), engines.end(),
                     [](const EngineRow& a, const EngineRow& b) { return a.engine < b.engine; });
  } else {
    std::stable_sort(engines.begin(), engines.end(), [](const EngineRow& a, const EngineRow& b) {
      if (a.word_accuracy != b.word_accuracy) return a.word_accuracy > b.word_accuracy;
      return a.engine < b.engine;
    });
  }
  std::vector<FieldRow> fields = report.fields;
  std::stable_sort(fields.begin(), fields.end(),
                   [](const FieldRow& a, const FieldRow& b) { return a.field < b.field; });

  std::vector<Row> engine_rows;
  for (const EngineRow& e : engines) {
    engine_rows.push_back({e.engine, std::to_string(e.docs), std::to_string(e.words), fixed4(e.cer), fixed4(e.wer),
                           fixed4(e.word_accuracy)});
  }
  auto field_row = [](const std::string& name, const Scores& s) {
    return Row{name, fixed4(s.precision), fixed4(s.recall), fixed4(s.f1), std::to_string(s.support)};
  };
  std::vector<Row> field_rows;
  for (const FieldRow& f : fields) field_rows.push_back(field_row(f.field, f.scores));
  if (report.micro) field_rows.push_back(field_row("(micro)", *report.micro));

  std::string out;
  emit_table(out, {"engine", "docs", "words", "cer", "wer", "word_accuracy"}, engine_rows, options.format);
  out += "\n";
  emit_table(out, {"field", "precision", "recall", "f1", "support"}, field_rows, options.format);
  if (options.layout_footer) {
    out += "\n";
    out += options.format == ReportFormat::csv ? "# " : "_";
    out += kLayoutFooter;
    out += options.format == ReportFormat::csv ? "\n" : "_\n";
  }
  return out;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  throw Error(ErrorCode::ConfigError, "unknown report format '" + std::string(s) + "'");
}

}  // namespace docex::eval
