#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace docex::pdf {

struct PdfRef {
  int num = 0;
  int gen = 0;
  auto operator<=>(const PdfRef&) const = default;
};

struct PdfName {
  std::string value;
  bool operator==(const PdfName&) const = default;
};

struct PdfString {
  std::string bytes;  // decoded (escapes / hex resolved)
  bool operator==(const PdfString&) const = default;
};

class PdfObject;
using PdfArray = std::vector<PdfObject>;

/// Insertion-ordered dictionary; later duplicate keys replace earlier ones.
class PdfDict {
 public:
  const PdfObject* find(std::string_view key) const;
  void set(std::string key, PdfObject value);
  const std::vector<std::pair<std::string, PdfObject>>& entries() const noexcept { return entries_; }
  bool operator==(const PdfDict&) const;

 private:
  std::vector<std::pair<std::string, PdfObject>> entries_;
};

struct PdfStream {
  PdfDict dict;
  std::string raw;  // undecoded stream bytes
  bool operator==(const PdfStream&) const = default;
};

struct PdfNull {
  bool operator==(const PdfNull&) const = default;
};

class PdfObject {
 public:
  using Value = std::variant<PdfNull, bool, std::int64_t, double, PdfString, PdfName, PdfArray, PdfDict,
                             PdfStream, PdfRef>;

  PdfObject() = default;
  template <typename T>
    requires std::is_constructible_v<Value, T&&>
  PdfObject(T&& v) : value_(std::forward<T>(v)) {}

  const Value& value() const noexcept { return value_; }

  template <typename T>
  bool is() const noexcept {
    return std::holds_alternative<T>(value_);
  }
  template <typename T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&value_);
  }

  bool is_null() const noexcept { return is<PdfNull>(); }
  bool is_number() const noexcept { return is<std::int64_t>() || is<double>(); }
  double number() const;  // throws OperandError when not numeric
  const std::string* name() const noexcept;

  bool operator==(const PdfObject&) const = default;

 private:
  Value value_;
};

std::string_view type_name(const PdfObject& obj) noexcept;

}  // namespace docex::pdf
