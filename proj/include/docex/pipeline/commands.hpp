#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "docex/eval/report.hpp"
#include "docex/pipeline/config.hpp"

namespace docex::pipeline {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct ExtractArgs {
  std::filesystem::path input;
  std::filesystem::path config;
  std::optional<std::string> engine;
  std::optional<std::filesystem::path> schema;  // overrides the config's schema
  std::filesystem::path out;
  unsigned jobs = 0;
};

struct EvaluateArgs {
  std::filesystem::path pred;
  std::filesystem::path gold;
  std::filesystem::path report;
  eval::ReportFormat format = eval::ReportFormat::csv;
};

struct CompareArgs {
  std::filesystem::path corpus;
  std::vector<std::string> engines;
  std::filesystem::path config;
  std::filesystem::path report;
  eval::ReportFormat format = eval::ReportFormat::csv;
  unsigned jobs = 0;
};

struct GenFixturesArgs {
  std::filesystem::path out;
  std::int64_t seed = 42;
  int count = 10;
};

int cmd_extract(const ExtractArgs& args, std::ostream& out);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out);
int cmd_compare(const CompareArgs& args, std::ostream& out);
int cmd_gen_fixtures(const GenFixturesArgs& args, std::ostream& out);

struct EvaluationRun {
  eval::EvalReport report;
  std::size_t text_pairs = 0;
  std::size_t field_pairs = 0;
};

/// Pairs `<pred>/<rel>.doc.json` with `<gold>/<rel>.txt` and `<pred>/<rel>.kv.json`
/// with `<gold>/<rel>.gold.json` (or `.funsd.json`). Unpaired files are skipped
/// with a warning.
EvaluationRun evaluate_directories(const std::filesystem::path& pred, const std::filesystem::path& gold);

/// Every image under `corpus` with a `.txt` transcript, run through each engine.
/// Preprocessing happens once per image. Throws UnknownEngine.
eval::EvalReport compare_engines(const std::filesystem::path& corpus, const PipelineConfig& config,
                                 const std::vector<std::string>& engines, unsigned jobs = 0);

}  // namespace docex::pipeline
