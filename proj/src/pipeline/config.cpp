#include "docex/pipeline/config.hpp"

#include <toml.hpp>

#include "docex/error.hpp"
#include "docex/util/files.hpp"

namespace docex::pipeline {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

template <typename T>
std::optional<T> get(const toml::table& t, std::string_view key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = n->value<double>()) return *v;  // integers convert too
  } else if constexpr (std::is_same_v<T, std::int64_t>) {
    if (n->is_integer()) return n->value<std::int64_t>();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (n->is_boolean()) return n->value<bool>();
  } else {
    if (n->is_string()) return n->value<std::string>();
  }
  fail(where + "." + std::string(key) + " has the wrong type");
}

const toml::table* subtable(const toml::table& t, std::string_view key) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return nullptr;
  if (!n->is_table()) fail("[" + std::string(key) + "] must be a table");
  return n->as_table();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::chrono::milliseconds timeout_of(const toml::table& t, const std::string& where) {
  const std::int64_t ms = get<std::int64_t>(t, "timeout_ms", where).value_or(60'000);
  if (ms <= 0) fail(where + ".timeout_ms must be positive");
  return std::chrono::milliseconds(ms);
}

ocr::EngineSpec parse_engine(const toml::table& t, std::size_t index, std::int64_t seed) {
  const std::string where = "engines[" + std::to_string(index) + "]";
  ocr::EngineSpec spec;
  spec.name = get<std::string>(t, "name", where).value_or("");
  try {
    spec.kind = ocr::parse_engine_kind(get<std::string>(t, "kind", where).value_or("mock"));
  } catch (const Error& e) {
    fail(where + ": " + e.what());
  }
  spec.command_template = get<std::string>(t, "command", where);
  spec.endpoint_url = get<std::string>(t, "endpoint", where);
  spec.credential_env_var = get<std::string>(t, "credential_env", where);
  spec.mock_char_error_rate = get<double>(t, "mock_char_error_rate", where);
  spec.mock_seed = get<std::int64_t>(t, "mock_seed", where);
  if (spec.kind == ocr::EngineKind::mock && !spec.mock_seed) spec.mock_seed = seed;
  spec.timeout = timeout_of(t, where);
  try {
    ocr::validate(spec);
  } catch (const Error& e) {
    fail(where + ": " + e.what());
  }
  return spec;
}

kv::ModelClientSpec parse_model(const toml::table& t) {
  kv::ModelClientSpec spec;
  spec.endpoint_url = get<std::string>(t, "endpoint_url", "model").value_or("");
  spec.model_name = get<std::string>(t, "model_name", "model").value_or("");
  spec.api_key_env_var = get<std::string>(t, "api_key_env_var", "model").value_or("");
  spec.max_retries = static_cast<int>(get<std::int64_t>(t, "max_retries", "model").value_or(3));
  spec.timeout = timeout_of(t, "model");
  spec.deterministic_decode = get<bool>(t, "deterministic_decode", "model").value_or(true);
  kv::validate(spec);
  return spec;
}

}  // namespace

PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    const auto& pos = e.source().begin;
    fail("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": " +
         std::string(e.description()));
  }

  PipelineConfig cfg;
  cfg.seed = get<std::int64_t>(root, "seed", "$").value_or(42);
  if (auto s = get<std::string>(root, "schema", "$")) cfg.schema_path = resolve(base_dir, *s);
  if (auto order = get<std::string>(root, "date_order", "$")) {
    if (*order == "day_first") cfg.date_order = kv::DateOrder::day_first;
    else if (*order == "month_first") cfg.date_order = kv::DateOrder::month_first;
    else fail("date_order must be day_first or month_first");
  }
  if (const toml::table* io = subtable(root, "io")) {
    if (auto p = get<std::string>(*io, "input", "io")) cfg.input_path = resolve(base_dir, *p);
    if (auto p = get<std::string>(*io, "output", "io")) cfg.output_path = resolve(base_dir, *p);
  }
  if (const toml::table* pre = subtable(root, "preprocess")) {
    cfg.preprocess.binarize = get<bool>(*pre, "binarize", "preprocess").value_or(true);
    cfg.preprocess.deskew = get<bool>(*pre, "deskew", "preprocess").value_or(true);
    cfg.preprocess.denoise = get<bool>(*pre, "denoise", "preprocess").value_or(true);
  }
  if (const toml::node* engines = root.get("engines")) {
    const toml::array* arr = engines->as_array();
    if (arr == nullptr) fail("engines must be an array of tables ([[engines]])");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const toml::table* t = (*arr)[i].as_table();
      if (t == nullptr) fail("engines[" + std::to_string(i) + "] must be a table");
      ocr::EngineSpec spec = parse_engine(*t, i, cfg.seed);
      for (const ocr::EngineSpec& other : cfg.engines) {
        if (other.name == spec.name) fail("duplicate engine name '" + spec.name + "'");
      }
      cfg.engines.push_back(std::move(spec));
    }
  }
  if (const toml::table* model = subtable(root, "model")) {
    try {
      cfg.model = parse_model(*model);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const Error& e) {
    fail(e.what());
  }
  return parse_config(text, path.parent_path());
}

const ocr::EngineSpec& find_engine(const PipelineConfig& config, std::string_view name) {
  for (const ocr::EngineSpec& e : config.engines) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::UnknownEngine, "engine '" + std::string(name) + "' is not defined in the config");
}

}  // namespace docex::pipeline
