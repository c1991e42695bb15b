#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "docex/pdf/object.hpp"

namespace docex::pdf {

enum class TokenKind {
  integer,
  real,
  name,
  string,
  array_open,
  array_close,
  dict_open,
  dict_close,
  keyword,
  end,
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // name value, decoded string bytes, or keyword
  std::int64_t integer = 0;
  double real = 0;
  std::size_t offset = 0;
};

// Shared by the file-level object parser and the content-stream tokenizer.
// Errors are reported as LexError with the byte offset.
class Lexer {
 public:
  explicit Lexer(std::string_view data, std::size_t pos = 0) : data_(data), pos_(pos) {}

  Token next();
  Token peek();

  std::size_t pos() const noexcept { return pos_; }
  void seek(std::size_t pos) noexcept { pos_ = pos; }
  std::string_view data() const noexcept { return data_; }
  void skip_whitespace_and_comments();

  // Parses one object. References (`n g R`) are recognized only when
  // `allow_refs` is set (file level), never inside content streams.
  PdfObject parse_object(bool allow_refs, int depth = 0);
  PdfObject object_from(Token tok, bool allow_refs, int depth);

 private:
  Token lex_literal_string();
  Token lex_hex_string();
  Token lex_name();
  Token lex_regular();

  std::string_view data_;
  std::size_t pos_ = 0;
};

bool is_pdf_whitespace(char c) noexcept;
bool is_pdf_delimiter(char c) noexcept;

struct ContentToken {
  bool is_operator = false;
  std::string op;     // operator keyword when is_operator
  PdfObject operand;  // operand value otherwise
  std::size_t offset = 0;
};

/// Content-stream lexing: operands (numbers, names, strings, arrays,
/// dictionaries, booleans, null) and operator keywords, in order.
std::vector<ContentToken> tokenize_content(std::string_view stream);

}  // namespace docex::pdf
