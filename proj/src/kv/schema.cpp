#include "docex/kv/schema.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "docex/error.hpp"
#include "docex/util/files.hpp"

namespace docex::kv {

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidSchema, why); }

bool is_snake_case(std::string_view s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(SemanticType t) noexcept {
  switch (t) {
    case SemanticType::string: return "string";
    case SemanticType::date: return "date";
    case SemanticType::money: return "money";
    case SemanticType::address: return "address";
    case SemanticType::person_name: return "person_name";
  }
  return "string";
}

SemanticType parse_semantic_type(std::string_view s) {
  for (auto t : {SemanticType::string, SemanticType::date, SemanticType::money, SemanticType::address,
                 SemanticType::person_name}) {
    if (to_string(t) == s) return t;
  }
  invalid("unknown field type '" + std::string(s) + "'");
}

const FieldDef* FieldSchema::find(std::string_view name) const noexcept {
  for (const FieldDef& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

void validate(const FieldSchema& schema) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < schema.fields.size(); ++i) {
    const std::string& n = schema.fields[i].name;
    if (!is_snake_case(n)) invalid("fields[" + std::to_string(i) + "]: name '" + n + "' is not lowercase snake_case");
    if (!seen.insert(n).second) invalid("duplicate field name '" + n + "'");
  }
}

FieldSchema parse_schema(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, e.what());
  }
  if (!j.is_object()) invalid("schema must be a JSON object");
  FieldSchema schema;
  if (j.contains("schema_name")) {
    if (!j["schema_name"].is_string()) invalid("schema_name must be a string");
    schema.schema_name = j["schema_name"].get<std::string>();
  }
  if (!j.contains("fields") || !j["fields"].is_array()) invalid("fields must be an array");
  std::size_t i = 0;
  for (const auto& f : j["fields"]) {
    const std::string at = "fields[" + std::to_string(i++) + "]";
    if (!f.is_object()) invalid(at + " must be an object");
    FieldDef def;
    if (!f.contains("name") || !f["name"].is_string()) invalid(at + ".name must be a string");
    def.name = f["name"].get<std::string>();
    if (!f.contains("type") || !f["type"].is_string()) invalid(at + ".type must be a string");
    def.type = parse_semantic_type(f["type"].get<std::string>());
    if (f.contains("required")) {
      if (!f["required"].is_boolean()) invalid(at + ".required must be a boolean");
      def.required = f["required"].get<bool>();
    }
    if (f.contains("description")) {
      if (!f["description"].is_string()) invalid(at + ".description must be a string");
      def.description = f["description"].get<std::string>();
    }
    schema.fields.push_back(std::move(def));
  }
  validate(schema);
  return schema;
}

FieldSchema load_schema(const std::filesystem::path& path) { return parse_schema(util::read_file(path)); }

std::string serialize_schema(const FieldSchema& schema) {
  nlohmann::json fields = nlohmann::json::array();
  for (const FieldDef& f : schema.fields) {
    fields.push_back({{"name", f.name},
                      {"type", std::string(to_string(f.type))},
                      {"required", f.required},
                      {"description", f.description}});
  }
  return nlohmann::json{{"schema_name", schema.schema_name}, {"fields", fields}}.dump(2);
}

FieldSchema receipt_schema() {
  return FieldSchema{"receipt",
                     {
                         {"company", SemanticType::string, true, "Name of the vendor or company issuing the receipt"},
                         {"date", SemanticType::date, true, "Date of the transaction"},
                         {"address", SemanticType::address, false, "Postal address of the vendor"},
                         {"total", SemanticType::money, true, "Total amount paid"},
                     }};
}

}  // namespace docex::kv
