#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "docex/core/model.hpp"
#include "docex/kv/extract.hpp"
#include "docex/ocr/engine.hpp"
#include "docex/pipeline/config.hpp"
#include "docex/preprocess/image.hpp"

namespace docex::pipeline {

enum class InputKind { image, pdf, docx, unsupported };

InputKind classify(const std::filesystem::path& path);

/// Binarize / deskew / denoise per the toggles. Deskew is skipped on blank pages.
ocr::PageImage preprocess_page(const preprocess::RasterImage& img, const PreprocessToggles& toggles);

/// `<stem>.truth.tsv` next to an image, if present.
std::optional<std::vector<core::Word>> load_ground_truth(const std::filesystem::path& image_path);

core::DocumentRecord scanned_document(const ocr::EngineSpec& engine, const ocr::PageImage& page,
                                      const std::optional<std::vector<core::Word>>& truth, std::string doc_id,
                                      std::string source_path);

struct IngestOptions {
  const ocr::EngineSpec* engine = nullptr;  // required for images
  PreprocessToggles toggles;
  std::optional<kv::FieldSchema> schema;  // writes .kv.json when set
  std::optional<kv::ModelClientSpec> model;
  kv::KvOptions kv;
};

enum class FileStatus { ok, needs_scan, failed };

struct FileOutcome {
  std::filesystem::path input;
  FileStatus status = FileStatus::ok;
  std::string message;
};

/// Builds the DocumentRecord for one input by file type. `relative` is used
/// for the doc id and source path so outputs do not depend on where the
/// corpus lives.
core::DocumentRecord ingest_document(const std::filesystem::path& path, const std::filesystem::path& relative,
                                     const IngestOptions& options);

/// Writes `<out>/<relative stem>.doc.json` (and `.kv.json`) atomically.
FileOutcome process_file(const std::filesystem::path& path, const std::filesystem::path& root,
                         const std::filesystem::path& out_dir, const IngestOptions& options);

/// Supported inputs under `input` (a file or a directory, recursive), sorted.
std::vector<std::filesystem::path> collect_inputs(const std::filesystem::path& input);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads (0 = hardware concurrency).
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace docex::pipeline
