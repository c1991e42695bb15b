#include "docex/eval/fields.hpp"

#include "docex/error.hpp"

namespace docex::eval {

FieldMatchCounts match_fields(const kv::ExtractionResult& pred, const GoldMap& gold) {
  for (const auto& [name, value] : gold) {
    if (pred.find(name) == nullptr) {
      throw Error(ErrorCode::SchemaMismatch, "gold field '" + name + "' is not in schema " + pred.schema_name);
    }
  }
  FieldMatchCounts counts;
  for (const auto& [name, fv] : pred.fields) {
    FieldCounts& c = counts[name];
    const auto g = gold.find(name);
    const bool has_pred = fv.present() && fv.normalized_value.has_value();
    if (g == gold.end()) {
      if (has_pred) ++c.fp;
    } else if (!has_pred) {
      ++c.fn;
    } else if (*fv.normalized_value == g->second) {
      ++c.tp;
    } else {
      ++c.fp;
      ++c.fn;
    }
  }
  return counts;
}

void accumulate(FieldMatchCounts& total, const FieldMatchCounts& doc) {
  for (const auto& [name, c] : doc) total[name] += c;
}

Scores score(const FieldCounts& c) noexcept {
  Scores s;
  s.support = c.tp + c.fn;
  if (c.tp + c.fp > 0) s.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) s.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

F1Summary f1(const FieldMatchCounts& counts) {
  F1Summary out;
  FieldCounts pooled;
  for (const auto& [name, c] : counts) {
    out.per_field[name] = score(c);
    pooled += c;
  }
  out.micro = score(pooled);
  return out;
}

}  // namespace docex::eval
