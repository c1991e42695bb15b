#pragma once

#include <string>
#include <string_view>

#include "docex/kv/schema.hpp"

namespace docex::kv {

// Reading of all-numeric dates such as 02/01/2023.
enum class DateOrder { day_first, month_first };

/// Canonical form used for matching. Throws UnparseableValue.
///   string / person_name / address: casefold, collapse whitespace, strip edge punctuation
///   money: currency symbols and separators dropped, exactly two decimals
///   date:  YYYY-MM-DD
std::string normalize_field(std::string_view raw, SemanticType type, DateOrder order = DateOrder::day_first);

struct Normalized {
  std::string value;
  bool unparseable = false;
};

/// Non-throwing variant: unparseable values fall back to the casefolded raw text.
Normalized normalize_or_flag(std::string_view raw, SemanticType type, DateOrder order = DateOrder::day_first);

std::string normalize_text(std::string_view raw);
std::string normalize_money(std::string_view raw);
std::string normalize_date(std::string_view raw, DateOrder order = DateOrder::day_first);

}  // namespace docex::kv
