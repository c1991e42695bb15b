#include <spdlog/spdlog.h>

#include "docex/kv/extract.hpp"

namespace docex::kv {

namespace {

struct Attempt {
  std::optional<ExtractionResult> result;  // full or partial parse
  std::string error;                       // empty on full success
};

Attempt run_attempt(const ModelCaller& caller, const std::string& prompt, const FieldSchema& schema,
                    DateOrder order) {
  Attempt a;
  try {
    a.result = parse_model_output(caller(prompt), schema, order);
  } catch (const RequiredFieldsMissing& e) {
    a.result = e.partial();
    a.error = e.what();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MissingCredential) throw;
    a.error = e.what();
  } catch (const std::exception& e) {
    a.error = e.what();
  }
  return a;
}

std::size_t present_count(const ExtractionResult& r) {
  std::size_t n = 0;
  for (const auto& [name, fv] : r.fields) n += fv.present() ? 1 : 0;
  return n;
}

}  // namespace

ExtractionResult extract_kv(const FieldSchema& schema, const core::DocumentRecord& doc, const ModelCaller& caller,
                            const KvOptions& options) {
  ExtractionResult result = empty_result(schema);
  bool used_model = false;

  if (caller) {
    used_model = true;
    std::string prompt;
    try {
      prompt = build_prompt(schema, core::flatten_text(doc), options.prompt_budget);
    } catch (const Error& e) {
      result.events.push_back({"model_skipped", e.what()});
      used_model = false;
    }
    if (used_model) {
      Attempt first = run_attempt(caller, prompt, schema, options.date_order);
      if (first.error.empty()) {
        result = std::move(*first.result);
      } else {
        result.events.push_back({"model_error", first.error});
        spdlog::warn("{}: model output rejected ({}); re-prompting once", doc.doc_id, first.error);
        Attempt second = run_attempt(caller, build_repair_prompt(prompt, first.error), schema, options.date_order);
        if (second.error.empty()) {
          result.fields = std::move(second.result->fields);
        } else {
          result.events.push_back({"repair_failed", second.error});
          // keep whichever partial parse recovered more fields
          const ExtractionResult* best = nullptr;
          for (const Attempt* a : {&first, &second}) {
            if (a->result && (best == nullptr || present_count(*a->result) > present_count(*best))) {
              best = &*a->result;
            }
          }
          if (best != nullptr) result.fields = best->fields;
        }
      }
    }
  }

  const bool need_rules = !used_model || present_count(result) < schema.fields.size();
  if (need_rules) {
    const ExtractionResult rules = rule_based_extract(schema, doc, options.date_order);
    for (auto& [name, fv] : result.fields) {
      if (fv.present()) continue;
      const FieldValue* r = rules.find(name);
      if (r == nullptr || !r->present()) continue;
      fv = *r;
      if (used_model) result.events.push_back({"rule_fallback", name});
    }
  }

  result.schema_name = schema.schema_name;
  result = annotate_confidence(std::move(result), doc);
  validate_result(result, schema);
  return result;
}

ExtractionResult extract_kv(const FieldSchema& schema, const core::DocumentRecord& doc,
                            const std::optional<ModelClientSpec>& spec, const KvOptions& options,
                            const ModelTransport& transport) {
  if (!spec) return extract_kv(schema, doc, ModelCaller{}, options);
  validate(*spec);
  const ModelCaller caller = [&](const std::string& prompt) { return call_model(*spec, prompt, transport); };
  return extract_kv(schema, doc, caller, options);
}

}  // namespace docex::kv
