#include "docex/pdf/object.hpp"

#include "docex/error.hpp"

namespace docex::pdf {

const PdfObject* PdfDict::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void PdfDict::set(std::string key, PdfObject value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

bool PdfDict::operator==(const PdfDict& other) const { return entries_ == other.entries_; }

double PdfObject::number() const {
  if (const auto* i = get_if<std::int64_t>()) return static_cast<double>(*i);
  if (const auto* d = get_if<double>()) return *d;
  throw Error(ErrorCode::OperandError, std::string("expected number, got ") + std::string(type_name(*this)));
}

const std::string* PdfObject::name() const noexcept {
  if (const auto* n = get_if<PdfName>()) return &n->value;
  return nullptr;
}

std::string_view type_name(const PdfObject& obj) noexcept {
  switch (obj.value().index()) {
    case 0: return "null";
    case 1: return "boolean";
    case 2: return "integer";
    case 3: return "real";
    case 4: return "string";
    case 5: return "name";
    case 6: return "array";
    case 7: return "dictionary";
    case 8: return "stream";
    case 9: return "reference";
  }
  return "unknown";
}

}  // namespace docex::pdf
