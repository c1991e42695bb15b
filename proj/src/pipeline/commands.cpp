#include "docex/pipeline/commands.hpp"

#include <map>
#include <ostream>

#include <spdlog/spdlog.h>

#include "docex/error.hpp"
#include "docex/eval/fields.hpp"
#include "docex/eval/loaders.hpp"
#include "docex/eval/metrics.hpp"
#include "docex/pipeline/fixtures.hpp"
#include "docex/pipeline/ingest.hpp"
#include "docex/preprocess/image_io.hpp"
#include "docex/util/files.hpp"

namespace docex::pipeline {

namespace fs = std::filesystem;

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Files under `dir` ending in `suffix`, keyed by relative path minus the suffix.
std::map<std::string, fs::path> by_stem(const fs::path& dir, std::string_view suffix) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = entry.path().lexically_relative(dir).generic_string();
    if (ends_with(rel, suffix)) out.emplace(rel.substr(0, rel.size() - suffix.size()), entry.path());
  }
  return out;
}

fs::path with_suffix(const fs::path& dir, const std::string& stem, std::string_view suffix) {
  return dir / (stem + std::string(suffix));
}

void write_report(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  util::write_file_atomic(path, bytes);
}

}  // namespace

int cmd_extract(const ExtractArgs& args, std::ostream& out) {
  IngestOptions options;
  PipelineConfig config;
  try {
    config = load_config(args.config);
    if (args.engine) options.engine = &find_engine(config, *args.engine);
    else if (!config.engines.empty()) options.engine = &config.engines.front();
    const std::optional<fs::path> schema_path = args.schema ? args.schema : config.schema_path;
    if (schema_path) options.schema = kv::load_schema(*schema_path);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
  options.toggles = config.preprocess;
  options.model = config.model;
  options.kv.date_order = config.date_order;

  std::vector<fs::path> inputs;
  try {
    inputs = collect_inputs(args.input);
    fs::create_directories(args.out);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  const fs::path root = fs::is_directory(args.input) ? args.input : args.input.parent_path();

  std::vector<FileOutcome> outcomes(inputs.size());
  parallel_for(inputs.size(), args.jobs,
               [&](std::size_t i) { outcomes[i] = process_file(inputs[i], root, args.out, options); });

  std::size_t ok = 0, needs_scan = 0, failed = 0;
  for (const FileOutcome& o : outcomes) {
    switch (o.status) {
      case FileStatus::ok:
        ++ok;
        out << "ok " << o.message << "\n";
        break;
      case FileStatus::needs_scan:
        ++needs_scan;
        out << "skip " << o.message << "\n";
        break;
      case FileStatus::failed:
        ++failed;
        out << "FAIL " << o.message << "\n";
        break;
    }
  }
  out << inputs.size() << " files: " << ok << " ok, " << needs_scan << " needs-scan, " << failed << " failed\n";
  return failed > 0 ? kExitFailure : kExitOk;
}

EvaluationRun evaluate_directories(const fs::path& pred, const fs::path& gold) {
  EvaluationRun run;

  std::map<std::string, eval::EngineTally> tallies;
  for (const auto& [stem, path] : by_stem(pred, ".doc.json")) {
    const fs::path ref = with_suffix(gold, stem, ".txt");
    if (!fs::exists(ref)) {
      spdlog::warn("unpaired: {} has no gold transcript", path.string());
      continue;
    }
    try {
      const core::DocumentRecord doc = core::parse_document(util::read_file(path));
      const std::string engine = doc.engine_name.value_or(std::string(core::to_string(doc.provenance)));
      tallies[engine].add(util::read_file(ref), core::flatten_text(doc));
      ++run.text_pairs;
    } catch (const Error& e) {
      spdlog::warn("{}: {}", path.string(), e.what());
    }
  }
  for (const auto& [engine, tally] : tallies) run.report.engines.push_back(tally.row(engine));

  eval::FieldMatchCounts counts;
  for (const auto& [stem, path] : by_stem(pred, ".kv.json")) {
    const fs::path sroie = with_suffix(gold, stem, ".gold.json");
    const fs::path funsd = with_suffix(gold, stem, ".funsd.json");
    if (!fs::exists(sroie) && !fs::exists(funsd)) {
      spdlog::warn("unpaired: {} has no gold fields", path.string());
      continue;
    }
    try {
      const kv::ExtractionResult result = kv::parse_result(util::read_file(path));
      const eval::GoldMap g = fs::exists(sroie) ? eval::load_sroie_like(util::read_file(sroie))
                                                : eval::load_funsd_like(util::read_file(funsd)).fields;
      eval::accumulate(counts, eval::match_fields(result, g));
      ++run.field_pairs;
    } catch (const Error& e) {
      spdlog::warn("{}: {}", path.string(), e.what());
    }
  }
  eval::add_field_rows(run.report, counts);
  return run;
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
  const EvaluationRun run = evaluate_directories(args.pred, args.gold);
  if (run.text_pairs + run.field_pairs == 0) {
    spdlog::error("no prediction/gold pairs found under {} and {}", args.pred.string(), args.gold.string());
    return kExitFailure;
  }
  try {
    write_report(args.report, eval::emit_report(run.report, {args.format, eval::EngineOrder::by_name, true}));
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  out << run.text_pairs << " text pairs, " << run.field_pairs << " field pairs -> " << args.report.string() << "\n";
  return kExitOk;
}

eval::EvalReport compare_engines(const fs::path& corpus, const PipelineConfig& config,
                                 const std::vector<std::string>& engines, unsigned jobs) {
  std::vector<const ocr::EngineSpec*> specs;
  for (const std::string& name : engines) specs.push_back(&find_engine(config, name));

  std::vector<fs::path> images;
  for (const fs::path& p : collect_inputs(corpus)) {
    fs::path txt = p;
    txt.replace_extension(".txt");
    if (classify(p) == InputKind::image && fs::exists(txt)) images.push_back(p);
  }

  struct Cell {
    std::string ref;
    std::string hyp;
    std::string error;
  };
  std::vector<std::vector<Cell>> cells(images.size(), std::vector<Cell>(specs.size()));
  parallel_for(images.size(), jobs, [&](std::size_t i) {
    fs::path txt = images[i];
    txt.replace_extension(".txt");
    fs::path id = images[i].lexically_relative(corpus);
    const std::string source = id.generic_string();
    id.replace_extension();
    try {
      const std::string ref = util::read_file(txt);
      const auto truth = load_ground_truth(images[i]);
      const ocr::PageImage page = preprocess_page(preprocess::load_image(images[i]), config.preprocess);
      for (std::size_t e = 0; e < specs.size(); ++e) {
        cells[i][e].ref = ref;
        try {
          cells[i][e].hyp = core::flatten_text(scanned_document(*specs[e], page, truth, id.generic_string(), source));
        } catch (const Error& err) {
          cells[i][e].error = err.what();
        }
      }
    } catch (const Error& err) {
      for (Cell& c : cells[i]) c.error = err.what();
    }
  });

  eval::EvalReport report;
  for (std::size_t e = 0; e < specs.size(); ++e) {
    eval::EngineTally tally;
    for (std::size_t i = 0; i < images.size(); ++i) {
      const Cell& c = cells[i][e];
      if (!c.error.empty()) {
        spdlog::warn("{} on {}: {}", specs[e]->name, images[i].string(), c.error);
        continue;
      }
      try {
        tally.add(c.ref, c.hyp);
      } catch (const Error& err) {
        spdlog::warn("{}: {}", images[i].string(), err.what());
      }
    }
    report.engines.push_back(tally.row(specs[e]->name));
  }
  return report;
}

int cmd_compare(const CompareArgs& args, std::ostream& out) {
  PipelineConfig config;
  try {
    config = load_config(args.config);
    for (const std::string& name : args.engines) find_engine(config, name);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
  if (args.engines.empty()) {
    spdlog::error("no engines named");
    return kExitConfig;
  }
  try {
    const eval::EvalReport report = compare_engines(args.corpus, config, args.engines, args.jobs);
    const std::string bytes = eval::emit_report(report, {args.format, eval::EngineOrder::by_word_accuracy, true});
    write_report(args.report, bytes);
    for (const eval::EngineRow& row : report.engines) {
      out << row.engine << ": " << row.docs << " docs, word accuracy " << row.word_accuracy << "\n";
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.code() == ErrorCode::UnknownEngine ? kExitConfig : kExitFailure;
  }
  return kExitOk;
}

int cmd_gen_fixtures(const GenFixturesArgs& args, std::ostream& out) {
  try {
    const FixtureSummary s = generate_fixtures(args.out, args.seed, args.count);
    out << s.pdfs << " PDFs, " << s.receipts << " receipt images, " << s.invoices << " invoice PDFs, " << s.skewed
        << " skewed images -> " << args.out.string() << "\n";
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitFailure;
  }
  return kExitOk;
}

}  // namespace docex::pipeline
