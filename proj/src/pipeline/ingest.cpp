#include "docex/pipeline/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "docex/docx/docx.hpp"
#include "docex/error.hpp"
#include "docex/pdf/extract.hpp"
#include "docex/preprocess/image_io.hpp"
#include "docex/preprocess/ops.hpp"
#include "docex/util/files.hpp"
#include "docex/util/text.hpp"

namespace docex::pipeline {

namespace fs = std::filesystem;

namespace {

std::string lower_extension(const fs::path& p) { return util::casefold(p.extension().string()); }

std::size_t word_count(const core::DocumentRecord& doc) {
  std::size_t n = 0;
  for (const core::Page& page : doc.pages) n += core::page_words(page).size();
  return n;
}

}  // namespace

InputKind classify(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pdf") return InputKind::pdf;
  if (ext == ".docx") return InputKind::docx;
  if (preprocess::is_supported_image(path)) return InputKind::image;
  return InputKind::unsupported;
}

ocr::PageImage preprocess_page(const preprocess::RasterImage& img, const PreprocessToggles& toggles) {
  if (!toggles.binarize && !toggles.deskew) return img;
  const preprocess::BinaryImage bin = preprocess::binarize(img, preprocess::otsu_threshold(preprocess::histogram(img)));
  double angle = 0;
  if (toggles.deskew) {
    try {
      angle = preprocess::estimate_skew(bin);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoContent) throw;
    }
  }
  if (!toggles.binarize) return angle == 0 ? img : preprocess::rotate_image(img, -angle);
  preprocess::BinaryImage out = angle == 0 ? bin : preprocess::rotate_image(bin, -angle);
  if (toggles.denoise && out.width() >= 3 && out.height() >= 3) out = preprocess::median_denoise(out);
  return out;
}

std::optional<std::vector<core::Word>> load_ground_truth(const fs::path& image_path) {
  fs::path truth = image_path;
  truth.replace_extension(".truth.tsv");
  if (!fs::exists(truth)) return std::nullopt;
  return ocr::parse_engine_tsv(util::read_file(truth));
}

core::DocumentRecord scanned_document(const ocr::EngineSpec& engine, const ocr::PageImage& page,
                                      const std::optional<std::vector<core::Word>>& truth, std::string doc_id,
                                      std::string source_path) {
  ocr::RecognizeContext ctx;
  ctx.ground_truth = truth;
  ctx.doc_key = doc_id;
  ocr::RecognizedPage rec = ocr::recognize(engine, page, ctx);
  const auto [w, h] = std::visit([](const auto& img) { return std::pair{img.width(), img.height()}; }, page);

  core::DocumentRecord doc;
  doc.doc_id = std::move(doc_id);
  doc.source_path = std::move(source_path);
  doc.provenance = core::Provenance::scanned;
  doc.engine_name = rec.engine_name;
  doc.pipeline_version = std::string(core::kPipelineVersion);
  doc.pages.push_back(core::assemble_page(std::move(rec.words), 0, w, h, core::Unit::pixel));
  core::validate(doc);
  return doc;
}

core::DocumentRecord ingest_document(const fs::path& path, const fs::path& relative, const IngestOptions& options) {
  fs::path id_path = relative;
  id_path.replace_extension();
  const std::string doc_id = id_path.generic_string();
  const std::string source = relative.generic_string();
  switch (classify(path)) {
    case InputKind::image: {
      if (options.engine == nullptr) throw Error(ErrorCode::ConfigError, "no OCR engine configured for images");
      const ocr::PageImage page = preprocess_page(preprocess::load_image(path), options.toggles);
      return scanned_document(*options.engine, page, load_ground_truth(path), doc_id, source);
    }
    case InputKind::pdf:
      return pdf::pdf_to_document(util::read_file(path), doc_id, source);
    case InputKind::docx:
      return docx::docx_to_document(docx::extract_docx(util::read_file(path)), doc_id, source);
    case InputKind::unsupported:
      break;
  }
  throw Error(ErrorCode::UnsupportedFeature, "unsupported file type '" + path.extension().string() + "'");
}

FileOutcome process_file(const fs::path& path, const fs::path& root, const fs::path& out_dir,
                         const IngestOptions& options) {
  FileOutcome outcome;
  outcome.input = path;
  const fs::path relative = root == path ? path.filename() : path.lexically_relative(root);
  try {
    const core::DocumentRecord doc = ingest_document(path, relative, options);
    fs::path base = out_dir / relative;
    base.replace_extension();
    fs::create_directories(base.parent_path());
    util::write_file_atomic(fs::path(base.string() + ".doc.json"), core::serialize_document(doc));
    outcome.message = relative.generic_string() + ": " + std::string(core::to_string(doc.provenance)) + ", " +
                      std::to_string(doc.pages.size()) + " page(s), " + std::to_string(word_count(doc)) + " words";
    if (options.schema) {
      const kv::ExtractionResult kv = kv::extract_kv(*options.schema, doc, options.model, options.kv);
      util::write_file_atomic(fs::path(base.string() + ".kv.json"), kv::serialize_result(kv, doc.doc_id));
      std::size_t present = 0;
      for (const auto& [name, fv] : kv.fields) present += fv.present() ? 1 : 0;
      outcome.message += ", " + std::to_string(present) + "/" + std::to_string(kv.fields.size()) + " fields";
    }
  } catch (const Error& e) {
    const std::string what = e.what();
    if (e.code() == ErrorCode::UnsupportedFeature && what.find("no text-show operators") != std::string::npos) {
      outcome.status = FileStatus::needs_scan;
      outcome.message = relative.generic_string() + ": needs-scan (no text layer)";
    } else {
      outcome.status = FileStatus::failed;
      outcome.message = relative.generic_string() + ": " + what;
    }
  } catch (const std::exception& e) {
    outcome.status = FileStatus::failed;
    outcome.message = relative.generic_string() + ": " + e.what();
  }
  return outcome;
}

std::vector<fs::path> collect_inputs(const fs::path& input) {
  std::vector<fs::path> out;
  if (fs::is_regular_file(input)) {
    out.push_back(input);
    return out;
  }
  if (!fs::is_directory(input)) throw Error(ErrorCode::Io, "input not found: " + input.string());
  for (const auto& entry : fs::recursive_directory_iterator(input)) {
    if (entry.is_regular_file() && classify(entry.path()) != InputKind::unsupported) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace docex::pipeline
