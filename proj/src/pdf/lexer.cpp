#include "docex/pdf/lexer.hpp"

#include <charconv>
#include <cmath>

#include "docex/error.hpp"

namespace docex::pdf {

namespace {

constexpr int kMaxDepth = 256;

[[noreturn]] void lex_error(std::size_t offset, const std::string& reason) {
  throw Error(ErrorCode::LexError, "offset " + std::to_string(offset) + ": " + reason);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_regular(char c) { return !is_pdf_whitespace(c) && !is_pdf_delimiter(c); }

// [+-]? (digits [. digits*] | . digits)
bool looks_numeric(std::string_view s, bool& is_int) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    if (s[i] >= '0' && s[i] <= '9') digits = true;
    else if (s[i] == '.' && !dot) dot = true;
    else return false;
  }
  is_int = !dot;
  return digits;
}

}  // namespace

bool is_pdf_whitespace(char c) noexcept {
  return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0';
}

bool is_pdf_delimiter(char c) noexcept {
  switch (c) {
    case '(': case ')': case '<': case '>': case '[': case ']':
    case '{': case '}': case '/': case '%':
      return true;
    default:
      return false;
  }
}

void Lexer::skip_whitespace_and_comments() {
  while (pos_ < data_.size()) {
    char c = data_[pos_];
    if (is_pdf_whitespace(c)) {
      ++pos_;
    } else if (c == '%') {
      while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
    } else {
      break;
    }
  }
}

Token Lexer::peek() {
  const std::size_t saved = pos_;
  Token t = next();
  pos_ = saved;
  return t;
}

Token Lexer::next() {
  skip_whitespace_and_comments();
  Token t;
  t.offset = pos_;
  if (pos_ >= data_.size()) return t;
  const char c = data_[pos_];
  switch (c) {
    case '(':
      return lex_literal_string();
    case '<':
      if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '<') {
        pos_ += 2;
        t.kind = TokenKind::dict_open;
        return t;
      }
      return lex_hex_string();
    case '>':
      if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '>') {
        pos_ += 2;
        t.kind = TokenKind::dict_close;
        return t;
      }
      lex_error(pos_, "unexpected '>'");
    case '[':
      ++pos_;
      t.kind = TokenKind::array_open;
      return t;
    case ']':
      ++pos_;
      t.kind = TokenKind::array_close;
      return t;
    case '/':
      return lex_name();
    case ')':
      lex_error(pos_, "unexpected ')'");
    case '{':
    case '}':
      lex_error(pos_, std::string("unsupported delimiter '") + c + "'");
    default:
      return lex_regular();
  }
}

Token Lexer::lex_literal_string() {
  Token t;
  t.kind = TokenKind::string;
  t.offset = pos_;
  ++pos_;
  int depth = 1;
  std::string& out = t.text;
  while (true) {
    if (pos_ >= data_.size()) lex_error(t.offset, "unterminated string");
    char c = data_[pos_++];
    if (c == '(') {
      ++depth;
      out.push_back(c);
    } else if (c == ')') {
      if (--depth == 0) break;
      out.push_back(c);
    } else if (c == '\\') {
      if (pos_ >= data_.size()) lex_error(t.offset, "unterminated string");
      char e = data_[pos_++];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '(': case ')': case '\\': out.push_back(e); break;
        case '\r':
          if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
          break;
        case '\n':
          break;
        default:
          if (e >= '0' && e <= '7') {
            int v = e - '0';
            for (int k = 0; k < 2 && pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '7'; ++k) {
              v = v * 8 + (data_[pos_++] - '0');
            }
            out.push_back(static_cast<char>(v & 0xFF));
          } else {
            out.push_back(e);  // unknown escapes keep the character
          }
      }
    } else if (c == '\r') {
      // end-of-line in a literal string reads as a single newline
      if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
      out.push_back('\n');
    } else {
      out.push_back(c);
    }
  }
  return t;
}

Token Lexer::lex_hex_string() {
  Token t;
  t.kind = TokenKind::string;
  t.offset = pos_;
  ++pos_;
  int pending = -1;
  while (true) {
    if (pos_ >= data_.size()) lex_error(t.offset, "unterminated hex string");
    char c = data_[pos_++];
    if (c == '>') break;
    if (is_pdf_whitespace(c)) continue;
    int v = hex_value(c);
    if (v < 0) lex_error(pos_ - 1, "invalid hex digit in string");
    if (pending < 0) {
      pending = v;
    } else {
      t.text.push_back(static_cast<char>(pending * 16 + v));
      pending = -1;
    }
  }
  if (pending >= 0) t.text.push_back(static_cast<char>(pending * 16));
  return t;
}

Token Lexer::lex_name() {
  Token t;
  t.kind = TokenKind::name;
  t.offset = pos_;
  ++pos_;
  while (pos_ < data_.size() && is_regular(data_[pos_])) {
    char c = data_[pos_++];
    if (c == '#' && pos_ + 1 < data_.size() && hex_value(data_[pos_]) >= 0 && hex_value(data_[pos_ + 1]) >= 0) {
      t.text.push_back(static_cast<char>(hex_value(data_[pos_]) * 16 + hex_value(data_[pos_ + 1])));
      pos_ += 2;
    } else {
      t.text.push_back(c);
    }
  }
  return t;
}

Token Lexer::lex_regular() {
  Token t;
  t.offset = pos_;
  const std::size_t start = pos_;
  while (pos_ < data_.size() && is_regular(data_[pos_])) ++pos_;
  std::string_view s = data_.substr(start, pos_ - start);
  bool is_int = false;
  if (looks_numeric(s, is_int)) {
    if (is_int) {
      std::string_view digits = s;
      if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.integer);
      if (ec == std::errc() && p == digits.data() + digits.size()) {
        t.kind = TokenKind::integer;
        return t;
      }
      // out of range integers degrade to reals
    }
    std::string buf(s);
    if (buf.front() == '+') buf.erase(0, 1);
    if (buf.front() == '.' || (buf.front() == '-' && buf.size() > 1 && buf[1] == '.')) {
      buf.insert(buf.front() == '-' ? 1 : 0, "0");
    }
    if (buf.back() == '.') buf.push_back('0');
    double v = 0;
    auto [p, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc() || !std::isfinite(v)) lex_error(start, "number out of range");
    t.kind = TokenKind::real;
    t.real = v;
    return t;
  }
  t.kind = TokenKind::keyword;
  t.text = std::string(s);
  return t;
}

PdfObject Lexer::parse_object(bool allow_refs, int depth) {
  Token tok = next();
  return object_from(std::move(tok), allow_refs, depth);
}

PdfObject Lexer::object_from(Token tok, bool allow_refs, int depth) {
  if (depth > kMaxDepth) lex_error(tok.offset, "nesting too deep");
  switch (tok.kind) {
    case TokenKind::integer: {
      if (allow_refs && tok.integer >= 0) {
        const std::size_t saved = pos_;
        Token gen = next();
        if (gen.kind == TokenKind::integer && gen.integer >= 0) {
          Token r = next();
          if (r.kind == TokenKind::keyword && r.text == "R") {
            if (tok.integer > INT32_MAX || gen.integer > INT32_MAX) lex_error(tok.offset, "reference out of range");
            return PdfRef{static_cast<int>(tok.integer), static_cast<int>(gen.integer)};
          }
        }
        pos_ = saved;
      }
      return tok.integer;
    }
    case TokenKind::real:
      return tok.real;
    case TokenKind::name:
      return PdfName{std::move(tok.text)};
    case TokenKind::string:
      return PdfString{std::move(tok.text)};
    case TokenKind::array_open: {
      PdfArray arr;
      while (true) {
        Token t = next();
        if (t.kind == TokenKind::array_close) break;
        if (t.kind == TokenKind::end) lex_error(tok.offset, "unterminated array");
        arr.push_back(object_from(std::move(t), allow_refs, depth + 1));
      }
      return arr;
    }
    case TokenKind::dict_open: {
      PdfDict dict;
      while (true) {
        Token k = next();
        if (k.kind == TokenKind::dict_close) break;
        if (k.kind == TokenKind::end) lex_error(tok.offset, "unterminated dictionary");
        if (k.kind != TokenKind::name) lex_error(k.offset, "dictionary key is not a name");
        Token v = next();
        if (v.kind == TokenKind::end || v.kind == TokenKind::dict_close) {
          lex_error(k.offset, "dictionary key without value");
        }
        dict.set(std::move(k.text), object_from(std::move(v), allow_refs, depth + 1));
      }
      return dict;
    }
    case TokenKind::keyword:
      if (tok.text == "true") return true;
      if (tok.text == "false") return false;
      if (tok.text == "null") return PdfNull{};
      lex_error(tok.offset, "unexpected keyword '" + tok.text + "'");
    case TokenKind::array_close:
      lex_error(tok.offset, "unexpected ']'");
    case TokenKind::dict_close:
      lex_error(tok.offset, "unexpected '>>'");
    case TokenKind::end:
      lex_error(tok.offset, "unexpected end of data");
  }
  lex_error(tok.offset, "unexpected token");
}

namespace {

// Inline image data follows `ID` and one whitespace byte; it ends at an `EI`
// keyword delimited by whitespace.
std::size_t skip_inline_image(std::string_view data, std::size_t pos) {
  if (pos < data.size() && is_pdf_whitespace(data[pos])) ++pos;
  for (std::size_t i = pos; i + 1 < data.size(); ++i) {
    if (data[i] == 'E' && data[i + 1] == 'I' && (i == 0 || is_pdf_whitespace(data[i - 1])) &&
        (i + 2 == data.size() || is_pdf_whitespace(data[i + 2]) || is_pdf_delimiter(data[i + 2]))) {
      return i;
    }
  }
  lex_error(pos, "unterminated inline image");
}

}  // namespace

std::vector<ContentToken> tokenize_content(std::string_view stream) {
  std::vector<ContentToken> out;
  Lexer lex(stream);
  while (true) {
    Token t = lex.next();
    if (t.kind == TokenKind::end) break;
    ContentToken ct;
    ct.offset = t.offset;
    if (t.kind == TokenKind::keyword && t.text != "true" && t.text != "false" && t.text != "null") {
      ct.is_operator = true;
      ct.op = t.text;
      const bool inline_image = ct.op == "ID";
      out.push_back(std::move(ct));
      if (inline_image) lex.seek(skip_inline_image(stream, lex.pos()));
      continue;
    }
    ct.operand = lex.object_from(std::move(t), false, 0);
    out.push_back(std::move(ct));
  }
  return out;
}

}  // namespace docex::pdf
