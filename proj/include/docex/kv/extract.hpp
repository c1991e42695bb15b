#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docex/core/model.hpp"
#include "docex/error.hpp"
#include "docex/kv/model_client.hpp"
#include "docex/kv/normalize.hpp"
#include "docex/kv/prompt.hpp"
#include "docex/kv/result.hpp"
#include "docex/kv/schema.hpp"

namespace docex::kv {

inline constexpr double kUnalignedModelConfidence = 0.5;
inline constexpr double kUnalignedRuleConfidence = 0.7;

// Thrown by parse_model_output when required fields are null or missing. The
// fields that did parse are carried along so callers can fill the gaps.
class RequiredFieldsMissing : public Error {
 public:
  RequiredFieldsMissing(std::vector<std::string> names, ExtractionResult partial);
  const std::vector<std::string>& names() const noexcept { return names_; }
  const ExtractionResult& partial() const noexcept { return partial_; }

 private:
  std::vector<std::string> names_;
  ExtractionResult partial_;
};

/// First balanced {...} in the text, skipping braces inside JSON strings.
/// Throws NoJsonFound without a '{', JsonMalformed when it never closes.
std::string_view find_json_object(std::string_view text);

/// Fields come back with source=model (or absent) and confidence 0.
ExtractionResult parse_model_output(std::string_view response, const FieldSchema& schema,
                                    DateOrder order = DateOrder::day_first);

/// Deterministic pattern heuristics; fields come back with source=rule or absent.
ExtractionResult rule_based_extract(const FieldSchema& schema, const core::DocumentRecord& doc,
                                    DateOrder order = DateOrder::day_first);

/// Aligns each present value with a contiguous run of document words.
ExtractionResult annotate_confidence(ExtractionResult result, const core::DocumentRecord& doc);

using ModelCaller = std::function<std::string(const std::string& prompt)>;

struct KvOptions {
  std::size_t prompt_budget = kDefaultPromptBudget;
  DateOrder date_order = DateOrder::day_first;
};

/// Model path when a caller is given (one repair re-prompt, then per-field
/// rule fallback), rules only otherwise. Always schema-complete; only
/// MissingCredential propagates.
ExtractionResult extract_kv(const FieldSchema& schema, const core::DocumentRecord& doc,
                            const ModelCaller& caller = {}, const KvOptions& options = {});

ExtractionResult extract_kv(const FieldSchema& schema, const core::DocumentRecord& doc,
                            const std::optional<ModelClientSpec>& spec, const KvOptions& options = {},
                            const ModelTransport& transport = ModelTransport::real());

}  // namespace docex::kv
