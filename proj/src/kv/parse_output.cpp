#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "docex/kv/extract.hpp"
#include "docex/util/text.hpp"

namespace docex::kv {

namespace {

std::string join_names(const std::vector<std::string>& names) { return util::join(names, ", "); }

}  // namespace

RequiredFieldsMissing::RequiredFieldsMissing(std::vector<std::string> names, ExtractionResult partial)
    : Error(ErrorCode::RequiredFieldMissing, join_names(names)),
      names_(std::move(names)),
      partial_(std::move(partial)) {}

std::string_view find_json_object(std::string_view text) {
  const std::size_t start = text.find('{');
  if (start == std::string_view::npos) throw Error(ErrorCode::NoJsonFound, "response contains no '{'");
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return text.substr(start, i - start + 1);
    }
  }
  throw Error(ErrorCode::JsonMalformed, "unbalanced braces starting at offset " + std::to_string(start));
}

ExtractionResult parse_model_output(std::string_view response, const FieldSchema& schema, DateOrder order) {
  const std::string_view candidate = find_json_object(response);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(candidate);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, e.what());
  }

  ExtractionResult result = empty_result(schema);
  for (const auto& [key, value] : j.items()) {
    if (schema.find(key) == nullptr) spdlog::warn("model output: ignoring unknown key '{}'", key);
  }
  std::vector<std::string> missing;
  for (const FieldDef& def : schema.fields) {
    FieldValue& fv = *result.find(def.name);
    std::optional<std::string> raw;
    if (j.contains(def.name)) {
      const auto& v = j[def.name];
      if (v.is_string()) raw = v.get<std::string>();
      else if (!v.is_null()) raw = v.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    }
    if (raw && util::trim(*raw).empty()) raw.reset();
    if (!raw) {
      if (def.required) missing.push_back(def.name);
      continue;
    }
    Normalized n = normalize_or_flag(*raw, def.type, order);
    fv.raw_value = *raw;
    fv.normalized_value = n.value;
    fv.unparseable = n.unparseable;
    fv.source = FieldSource::model;
  }
  if (!missing.empty()) throw RequiredFieldsMissing(std::move(missing), std::move(result));
  return result;
}

}  // namespace docex::kv
