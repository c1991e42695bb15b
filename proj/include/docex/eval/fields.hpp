#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "docex/kv/result.hpp"

namespace docex::eval {

// field name -> normalized gold value; absent fields have no entry
using GoldMap = std::map<std::string, std::string>;

struct FieldCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  FieldCounts& operator+=(const FieldCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const FieldCounts&) const = default;
};

using FieldMatchCounts = std::map<std::string, FieldCounts>;

/// Strict slot scoring on normalized values: a wrong prediction is one fp and
/// one fn. Throws SchemaMismatch when gold names a field the prediction lacks.
FieldMatchCounts match_fields(const kv::ExtractionResult& pred, const GoldMap& gold);

void accumulate(FieldMatchCounts& total, const FieldMatchCounts& doc);

struct Scores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;  // tp + fn
};

Scores score(const FieldCounts& c) noexcept;

struct F1Summary {
  std::map<std::string, Scores> per_field;
  Scores micro;
};

F1Summary f1(const FieldMatchCounts& counts);

}  // namespace docex::eval
