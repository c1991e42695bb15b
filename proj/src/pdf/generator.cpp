#include "docex/pdf/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <zlib.h>

#include "docex/error.hpp"
#include "docex/pdf/encoding.hpp"
#include "docex/util/text.hpp"

namespace docex::pdf {

namespace {

constexpr double kMargin = 72.0;
constexpr double kGlyphWidth = 500.0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string hex_cp(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

std::string encode_line(const std::string& line) {
  std::string out;
  for (char32_t cp : util::decode_utf8(line)) {
    if (!generator_supports(cp)) {
      std::string shown = cp >= 0x20 && cp != 0x7F ? "'" + util::encode_utf8(std::u32string(1, cp)) + "' " : "";
      throw Error(ErrorCode::UnsupportedCharacter, "character " + shown + hex_cp(cp) + " in line \"" + line + "\"");
    }
    out.push_back(static_cast<char>(*encode_code(BaseEncoding::win_ansi, cp)));
  }
  return out;
}

std::string literal(const std::string& bytes) {
  std::string out = "(";
  for (char c : bytes) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '(' || c == ')' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (u >= 0x80) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\%03o", u);
      out += buf;
    } else {
      out.push_back(c);
    }
  }
  out.push_back(')');
  return out;
}

std::string deflate_bytes(const std::string& in) {
  uLongf cap = compressBound(static_cast<uLong>(in.size()));
  std::string out(cap, '\0');
  if (compress2(reinterpret_cast<Bytef*>(out.data()), &cap, reinterpret_cast<const Bytef*>(in.data()),
                static_cast<uLong>(in.size()), Z_BEST_COMPRESSION) != Z_OK) {
    throw Error(ErrorCode::Io, "zlib compression failed");
  }
  out.resize(cap);
  return out;
}

class Writer {
 public:
  void object(int num, const std::string& body) {
    if (offsets_.size() < static_cast<std::size_t>(num)) offsets_.resize(num, 0);
    offsets_[num - 1] = out_.size();
    out_ += std::to_string(num) + " 0 obj\n" + body + "\nendobj\n";
  }

  std::string finish(int root) {
    const std::size_t xref = out_.size();
    out_ += "xref\n0 " + std::to_string(offsets_.size() + 1) + "\n";
    out_ += "0000000000 65535 f \n";
    char buf[32];
    for (std::size_t off : offsets_) {
      std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
      out_ += buf;
    }
    out_ += "trailer\n<< /Size " + std::to_string(offsets_.size() + 1) + " /Root " + std::to_string(root) +
            " 0 R >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
    return std::move(out_);
  }

 private:
  std::string out_ = "%PDF-1.4\n%\xE2\xE3\xCF\xD3\n";
  std::vector<std::size_t> offsets_;
};

}  // namespace

bool generator_supports(char32_t cp) noexcept {
  if (cp < 0x20 || cp == 0x7F || cp == 0xA0 || cp == 0xAD) return false;
  return encode_code(BaseEncoding::win_ansi, cp).has_value();
}

std::string generate_pdf(const std::vector<std::vector<std::string>>& pages, double font_size,
                         StreamVariant variant) {
  if (!(font_size > 0)) throw Error(ErrorCode::InvariantViolation, "font size must be positive");
  const double leading = 1.2 * font_size;

  // Encode everything first so an unsupported character fails before any output.
  std::vector<std::vector<std::string>> encoded;
  for (const auto& lines : pages) {
    auto& enc = encoded.emplace_back();
    for (const std::string& l : lines) enc.push_back(encode_line(l));
  }

  Writer w;
  const int catalog = 1, page_tree = 2, font = 3;
  const int first_page = 4;  // each page takes two objects: page, content

  std::string widths = "[";
  for (int c = 32; c <= 255; ++c) widths += (c == 32 ? "" : " ") + num(kGlyphWidth);
  widths += "]";

  std::string kids;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    kids += (i ? " " : "") + std::to_string(first_page + 2 * static_cast<int>(i)) + " 0 R";
  }

  w.object(catalog, "<< /Type /Catalog /Pages 2 0 R >>");
  w.object(page_tree, "<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages.size()) + " >>");
  w.object(font, "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /Encoding /WinAnsiEncoding /FirstChar 32 "
                 "/LastChar 255 /Widths " + widths + " >>");

  for (std::size_t i = 0; i < encoded.size(); ++i) {
    const auto& lines = encoded[i];
    std::size_t longest = 0;
    for (const auto& l : lines) longest = std::max(longest, l.size());
    const double height = std::max(792.0, std::ceil(2 * kMargin + leading * static_cast<double>(lines.size())));
    const double width =
        std::max(612.0, std::ceil(2 * kMargin + kGlyphWidth / 1000.0 * font_size * static_cast<double>(longest)));

    std::string content = "BT\n/F1 " + num(font_size) + " Tf\n" + num(leading) + " TL\n" + num(kMargin) + " " +
                          num(height - kMargin) + " Td\n";
    for (std::size_t j = 0; j < lines.size(); ++j) {
      if (j > 0) content += "T*\n";
      if (!lines[j].empty()) content += literal(lines[j]) + " Tj\n";
    }
    content += "ET\n";

    std::string dict = "<< /Length ";
    std::string data = content;
    if (variant == StreamVariant::flate) {
      data = deflate_bytes(content);
      dict = "<< /Filter /FlateDecode /Length ";
    }
    const int page_obj = first_page + 2 * static_cast<int>(i);
    w.object(page_obj, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " + num(width) + " " + num(height) +
                           "] /Resources << /Font << /F1 3 0 R >> >> /Contents " + std::to_string(page_obj + 1) +
                           " 0 R >>");
    w.object(page_obj + 1, dict + std::to_string(data.size()) + " >>\nstream\n" + data + "\nendstream");
  }
  return w.finish(catalog);
}

}  // namespace docex::pdf
