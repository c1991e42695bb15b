#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "docex/kv/schema.hpp"

namespace docex::kv {

inline constexpr std::size_t kDefaultPromptBudget = 12'000;  // code points of document text

inline constexpr std::string_view kDocumentBegin = "<<<DOCUMENT";
inline constexpr std::string_view kDocumentEnd = "DOCUMENT>>>";

/// Deterministic template. Text longer than `budget` code points is cut to
/// its first `budget` code points and a truncation note follows the fence.
/// Throws EmptyDocument for blank text.
std::string build_prompt(const FieldSchema& schema, std::string_view raw_text,
                         std::size_t budget = kDefaultPromptBudget);

/// Second attempt after a parse failure: the original prompt plus the error.
std::string build_repair_prompt(std::string_view prompt, std::string_view error);

}  // namespace docex::kv
