#pragma once

#include <string>
#include <string_view>

#include "docex/eval/fields.hpp"
#include "docex/kv/normalize.hpp"

namespace docex::eval {

struct FunsdGold {
  GoldMap fields;
  std::string raw_text;  // entity texts in form order, one per line
};

/// `form` entities with linked question -> answer pairs. The question text
/// becomes a snake_case key; several answers are joined by a space in link
/// order. Throws JsonMalformed / MissingField.
FunsdGold load_funsd_like(std::string_view json);

/// Flat receipt map (company, date, address, total), normalized per type.
/// Unknown keys are skipped with a warning. Throws JsonMalformed, and
/// UnparseableValue for gold values that do not normalize.
GoldMap load_sroie_like(std::string_view json, kv::DateOrder order = kv::DateOrder::day_first);

/// "Date of Birth:" -> "date_of_birth".
std::string label_to_key(std::string_view label);

}  // namespace docex::eval
