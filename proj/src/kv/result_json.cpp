#include <nlohmann/json.hpp>

#include "docex/error.hpp"
#include "docex/kv/result.hpp"

namespace docex::kv {

namespace {

[[noreturn]] void violation(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + what);
}

nlohmann::json opt(const std::optional<std::string>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

const nlohmann::json& member(const nlohmann::json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) violation(path + "." + key, "missing");
  return obj.at(key);
}

std::optional<std::string> opt_string(const nlohmann::json& v, const std::string& path) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) violation(path, "expected string or null");
  return v.get<std::string>();
}

}  // namespace

std::string_view to_string(FieldSource s) noexcept {
  switch (s) {
    case FieldSource::model: return "model";
    case FieldSource::rule: return "rule";
    case FieldSource::absent: return "absent";
  }
  return "absent";
}

FieldSource parse_field_source(std::string_view s) {
  if (s == "model") return FieldSource::model;
  if (s == "rule") return FieldSource::rule;
  if (s == "absent") return FieldSource::absent;
  violation("source", "unknown value '" + std::string(s) + "'");
}

const FieldValue* ExtractionResult::find(std::string_view name) const noexcept {
  for (const auto& [n, v] : fields) {
    if (n == name) return &v;
  }
  return nullptr;
}

FieldValue* ExtractionResult::find(std::string_view name) noexcept {
  for (auto& [n, v] : fields) {
    if (n == name) return &v;
  }
  return nullptr;
}

ExtractionResult empty_result(const FieldSchema& schema) {
  ExtractionResult r;
  r.schema_name = schema.schema_name;
  for (const FieldDef& f : schema.fields) r.fields.emplace_back(f.name, FieldValue{});
  return r;
}

void validate_result(const ExtractionResult& result, const FieldSchema& schema) {
  if (result.fields.size() != schema.fields.size()) {
    violation("fields", "expected " + std::to_string(schema.fields.size()) + " fields, got " +
                            std::to_string(result.fields.size()));
  }
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    const auto& [name, v] = result.fields[i];
    const std::string path = "fields." + schema.fields[i].name;
    if (name != schema.fields[i].name) violation(path, "found '" + name + "' in its position");
    if (!(v.confidence >= 0.0 && v.confidence <= 1.0)) violation(path, "confidence outside [0,1]");
    if (!v.present()) {
      if (v.raw_value || v.normalized_value || v.confidence != 0.0 || !v.source_spans.empty()) {
        violation(path, "absent field carries a value or confidence");
      }
    } else if (!v.raw_value || !v.normalized_value) {
      violation(path, "present field without a value");
    }
  }
}

bool is_schema_complete(const ExtractionResult& result, const FieldSchema& schema) noexcept {
  try {
    validate_result(result, schema);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string serialize_result(const ExtractionResult& result, std::string_view doc_id) {
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& [name, v] : result.fields) {
    nlohmann::json spans = nlohmann::json::array();
    for (const SourceSpan& s : v.source_spans) spans.push_back({{"page", s.page}, {"words", s.word_indices}});
    fields.push_back({{"name", name},
                      {"raw_value", opt(v.raw_value)},
                      {"normalized_value", opt(v.normalized_value)},
                      {"confidence", v.confidence},
                      {"source", std::string(to_string(v.source))},
                      {"source_spans", spans},
                      {"unparseable", v.unparseable}});
  }
  nlohmann::json events = nlohmann::json::array();
  for (const ExtractionEvent& e : result.events) events.push_back({{"kind", e.kind}, {"detail", e.detail}});
  nlohmann::json j{{"doc_id", std::string(doc_id)},
                   {"schema_name", result.schema_name},
                   {"fields", fields},
                   {"events", events}};
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ExtractionResult parse_result(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  ExtractionResult r;
  const auto& name = member(j, "schema_name", "$");
  if (!name.is_string()) violation("schema_name", "expected string");
  r.schema_name = name.get<std::string>();
  const auto& fields = member(j, "fields", "$");
  if (!fields.is_array()) violation("fields", "expected array");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string path = "fields[" + std::to_string(i) + "]";
    const auto& f = fields[i];
    FieldValue v;
    const auto& n = member(f, "name", path);
    if (!n.is_string()) violation(path + ".name", "expected string");
    v.raw_value = opt_string(member(f, "raw_value", path), path + ".raw_value");
    v.normalized_value = opt_string(member(f, "normalized_value", path), path + ".normalized_value");
    const auto& c = member(f, "confidence", path);
    if (!c.is_number()) violation(path + ".confidence", "expected number");
    v.confidence = c.get<double>();
    const auto& s = member(f, "source", path);
    if (!s.is_string()) violation(path + ".source", "expected string");
    v.source = parse_field_source(s.get<std::string>());
    if (f.contains("unparseable") && f["unparseable"].is_boolean()) v.unparseable = f["unparseable"].get<bool>();
    if (f.contains("source_spans")) {
      const auto& spans = f["source_spans"];
      if (!spans.is_array()) violation(path + ".source_spans", "expected array");
      for (const auto& sp : spans) {
        SourceSpan span;
        const auto& page = member(sp, "page", path + ".source_spans");
        const auto& words = member(sp, "words", path + ".source_spans");
        if (!page.is_number_integer() || !words.is_array()) violation(path + ".source_spans", "bad span");
        span.page = page.get<int>();
        for (const auto& w : words) {
          if (!w.is_number_integer()) violation(path + ".source_spans", "bad word index");
          span.word_indices.push_back(w.get<int>());
        }
        v.source_spans.push_back(std::move(span));
      }
    }
    r.fields.emplace_back(n.get<std::string>(), std::move(v));
  }
  if (j.contains("events") && j["events"].is_array()) {
    for (const auto& e : j["events"]) {
      if (e.is_object() && e.contains("kind") && e["kind"].is_string()) {
        r.events.push_back({e["kind"].get<std::string>(), e.value("detail", std::string{})});
      }
    }
  }
  return r;
}

}  // namespace docex::kv
