#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "docex/core/model.hpp"
#include "docex/preprocess/image.hpp"

namespace docex::ocr {

enum class EngineKind { external_process, http, mock };

std::string_view to_string(EngineKind kind) noexcept;
EngineKind parse_engine_kind(std::string_view s);  // throws InvalidEngineSpec

struct EngineSpec {
  std::string name;
  EngineKind kind = EngineKind::mock;
  std::optional<std::string> command_template;    // external_process: uses {input} / {output}
  std::optional<std::string> endpoint_url;        // http
  std::optional<std::string> credential_env_var;  // http bearer token source
  std::optional<double> mock_char_error_rate;     // mock, in [0,1]
  std::optional<std::int64_t> mock_seed;          // mock
  std::chrono::milliseconds timeout{60'000};
};

/// Throws InvalidEngineSpec when kind-specific fields are missing or out of range.
void validate(const EngineSpec& spec);

struct RecognizedPage {
  std::vector<core::Word> words;  // pixel units of the input image
  std::string engine_name;
  std::int64_t elapsed_ms = 0;
};

using PageImage = std::variant<preprocess::RasterImage, preprocess::BinaryImage>;

struct RecognizeContext {
  // Ground truth words for the page; only the mock engine reads them.
  std::optional<std::vector<core::Word>> ground_truth;
  // Distinguishes documents in the mock's random stream.
  std::string doc_key;
};

RecognizedPage recognize(const EngineSpec& spec, const PageImage& image, const RecognizeContext& ctx = {});

// Tab-separated word rows with the columns: level, page_num, block_num,
// par_num, line_num, word_num, left, top, width, height, conf, text.
std::vector<core::Word> parse_engine_tsv(std::string_view text);
std::string render_engine_tsv(const std::vector<core::Word>& words);

// {"annotations":[{"text":..., "boundingPoly":{"vertices":[{"x":..,"y":..},...]},
// "confidence":...}]}; bbox is the hull of the vertices.
std::vector<core::Word> parse_http_ocr_json(std::string_view body);

// Substitution-only noise channel over ground-truth words.
RecognizedPage mock_recognize(const EngineSpec& spec, const std::vector<core::Word>& gold,
                              std::string_view doc_key = {});

// Candidate replacements for a code point in the mock's confusion table.
std::u32string confusable_candidates(char32_t cp);

}  // namespace docex::ocr
