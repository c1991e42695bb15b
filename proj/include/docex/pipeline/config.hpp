#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docex/kv/model_client.hpp"
#include "docex/kv/normalize.hpp"
#include "docex/ocr/engine.hpp"

namespace docex::pipeline {

struct PreprocessToggles {
  bool binarize = true;
  bool deskew = true;
  bool denoise = true;
};

struct PipelineConfig {
  std::vector<ocr::EngineSpec> engines;
  PreprocessToggles preprocess;
  std::optional<kv::ModelClientSpec> model;
  std::optional<std::filesystem::path> schema_path;  // resolved against the config file's directory
  std::optional<std::filesystem::path> input_path;
  std::optional<std::filesystem::path> output_path;
  kv::DateOrder date_order = kv::DateOrder::day_first;
  std::int64_t seed = 42;
};

// Example:
//   seed = 42
//   schema = "schema.json"
//   date_order = "day_first"
//   [io]
//   input = "fixtures"
//   output = "out"
//   [preprocess]
//   binarize = true
//   [[engines]]
//   name = "mock-vision"
//   kind = "mock"                  # or "external_process" / "http"
//   mock_char_error_rate = 0.06
//   [model]
//   endpoint_url = "https://..."
//   model_name = "..."
//   api_key_env_var = "DOCEX_MODEL_KEY"
//
// Mock engines without mock_seed inherit the top-level seed. Throws ConfigError.
PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Throws UnknownEngine.
const ocr::EngineSpec& find_engine(const PipelineConfig& config, std::string_view name);

}  // namespace docex::pipeline
