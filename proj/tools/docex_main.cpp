// docex: batch extraction, evaluation and engine comparison.
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "docex/pipeline/commands.hpp"

namespace {

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    std::string name = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!name.empty()) out.push_back(std::move(name));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace docex::pipeline;

  spdlog::set_default_logger(spdlog::stderr_color_mt("docex"));
  spdlog::set_pattern("%^%l%$: %v");

  CLI::App app{"Document digitization and key-value extraction pipeline"};
  app.require_subcommand(1);

  std::string config;
  unsigned jobs = 0;
  bool verbose = false;
  app.add_option("--config", config, "Pipeline config (TOML)");
  app.add_option("--jobs", jobs, "Worker threads (0 = CPU count)");
  app.add_flag("--verbose", verbose, "Debug logging");

  ExtractArgs ex;
  std::string ex_engine, ex_schema;
  auto* extract = app.add_subcommand("extract", "Convert inputs to .doc.json (and .kv.json with a schema)");
  extract->add_option("--input", ex.input, "Input file or directory")->required();
  extract->add_option("--config", config, "Pipeline config (TOML)");
  extract->add_option("--engine", ex_engine, "OCR engine name from the config");
  extract->add_option("--schema", ex_schema, "Field schema JSON");
  extract->add_option("--out", ex.out, "Output directory")->required();
  extract->add_option("--jobs", jobs, "Worker threads");

  EvaluateArgs ev;
  std::string ev_format = "csv";
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold files");
  evaluate->add_option("--pred", ev.pred, "Prediction directory")->required();
  evaluate->add_option("--gold", ev.gold, "Gold directory")->required();
  evaluate->add_option("--report", ev.report, "Report path")->required();
  evaluate->add_option("--format", ev_format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown", "md"}));

  CompareArgs cmp;
  std::string cmp_engines, cmp_format = "csv";
  auto* compare = app.add_subcommand("compare", "Run several engines over a corpus and rank them");
  compare->add_option("--corpus", cmp.corpus, "Corpus directory")->required();
  compare->add_option("--engines", cmp_engines, "Comma-separated engine names")->required();
  compare->add_option("--config", config, "Pipeline config (TOML)");
  compare->add_option("--report", cmp.report, "Report path")->required();
  compare->add_option("--format", cmp_format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown", "md"}));
  compare->add_option("--jobs", jobs, "Worker threads");

  GenFixturesArgs gen;
  auto* fixtures = app.add_subcommand("gen-fixtures", "Write the deterministic synthetic corpus");
  fixtures->add_option("--out", gen.out, "Output directory")->required();
  fixtures->add_option("--seed", gen.seed, "Seed");
  fixtures->add_option("--count", gen.count, "Documents per kind")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  auto need_config = [&]() {
    if (config.empty()) {
      spdlog::error("--config is required");
      return false;
    }
    return true;
  };

  if (extract->parsed()) {
    if (!need_config()) return kExitConfig;
    ex.config = config;
    ex.jobs = jobs;
    if (!ex_engine.empty()) ex.engine = ex_engine;
    if (!ex_schema.empty()) ex.schema = ex_schema;
    return cmd_extract(ex, std::cout);
  }
  if (evaluate->parsed()) {
    ev.format = docex::eval::parse_report_format(ev_format);
    return cmd_evaluate(ev, std::cout);
  }
  if (compare->parsed()) {
    if (!need_config()) return kExitConfig;
    cmp.config = config;
    cmp.jobs = jobs;
    cmp.engines = split_names(cmp_engines);
    cmp.format = docex::eval::parse_report_format(cmp_format);
    return cmd_compare(cmp, std::cout);
  }
  return cmd_gen_fixtures(gen, std::cout);
}
