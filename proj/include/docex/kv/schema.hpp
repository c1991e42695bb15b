#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace docex::kv {

enum class SemanticType { string, date, money, address, person_name };

std::string_view to_string(SemanticType t) noexcept;
SemanticType parse_semantic_type(std::string_view s);  // InvalidSchema

struct FieldDef {
  std::string name;  // lowercase snake_case
  SemanticType type = SemanticType::string;
  bool required = false;
  std::string description;
};

struct FieldSchema {
  std::string schema_name;
  std::vector<FieldDef> fields;

  const FieldDef* find(std::string_view name) const noexcept;
};

/// Unique, non-empty, lowercase snake_case names; throws InvalidSchema.
void validate(const FieldSchema& schema);

// {"schema_name": ..., "fields": [{"name", "type", "required", "description"}]}
FieldSchema parse_schema(std::string_view json);
FieldSchema load_schema(const std::filesystem::path& path);
std::string serialize_schema(const FieldSchema& schema);

/// company / date / address / total, the receipt field set used by fixtures.
FieldSchema receipt_schema();

}  // namespace docex::kv
