#include <cmath>

#include "docex/error.hpp"
#include "docex/pdf/text.hpp"
#include "docex/util/text.hpp"

namespace docex::pdf {

double FontInfo::width(unsigned char code) const noexcept {
  if (widths.empty()) return kDefaultGlyphWidth;
  const int i = static_cast<int>(code) - first_char;
  if (i < 0 || i >= static_cast<int>(widths.size())) return kDefaultGlyphWidth;
  return widths[static_cast<std::size_t>(i)];
}

Matrix Matrix::operator*(const Matrix& r) const noexcept {
  return Matrix{a * r.a + b * r.c,       a * r.b + b * r.d,       c * r.a + d * r.c,
                c * r.b + d * r.d,       e * r.a + f * r.c + r.e, e * r.b + f * r.d + r.f};
}

namespace {

[[noreturn]] void unsupported(const std::string& what) { throw Error(ErrorCode::UnsupportedFeature, what); }

BaseEncoding encoding_from_name(const std::string& name) {
  if (name == "WinAnsiEncoding") return BaseEncoding::win_ansi;
  if (name == "StandardEncoding") return BaseEncoding::standard;
  unsupported(name);
}

FontInfo load_font(const std::string& key, const PdfDict& fd, const PdfObjectTable& table) {
  FontInfo font;
  const std::string* subtype = fd.find("Subtype") ? table.resolve(*fd.find("Subtype")).name() : nullptr;
  if (subtype != nullptr) {
    if (*subtype == "Type0" || subtype->rfind("CIDFontType", 0) == 0) unsupported("Type0 fonts (" + key + ")");
    if (*subtype == "Type3") unsupported("Type3 fonts (" + key + ")");
  }
  if (fd.find("ToUnicode") != nullptr) unsupported("ToUnicode CMaps (" + key + ")");
  if (const PdfObject* bf = fd.find("BaseFont")) {
    if (const std::string* n = table.resolve(*bf).name()) font.base_font = *n;
  }
  if (const PdfObject* enc = fd.find("Encoding")) {
    const PdfObject& e = table.resolve(*enc);
    if (const std::string* n = e.name()) {
      font.encoding = encoding_from_name(*n);
    } else if (const auto* d = e.get_if<PdfDict>()) {
      if (d->find("Differences") != nullptr) unsupported("encoding /Differences (" + key + ")");
      if (const PdfObject* base = d->find("BaseEncoding")) {
        const std::string* n = table.resolve(*base).name();
        if (n == nullptr) unsupported("malformed /BaseEncoding (" + key + ")");
        font.encoding = encoding_from_name(*n);
      }
    }
  }
  if (const PdfObject* w = fd.find("Widths")) {
    const auto* arr = table.resolve(*w).get_if<PdfArray>();
    if (arr == nullptr) throw Error(ErrorCode::OperandError, "font " + key + ": /Widths is not an array");
    if (const PdfObject* fc = fd.find("FirstChar")) font.first_char = static_cast<int>(table.resolve(*fc).number());
    for (const PdfObject& v : *arr) font.widths.push_back(table.resolve(v).number());
  }
  return font;
}

struct GraphicsState {
  Matrix ctm;
  PdfTextState text;
};

class Interpreter {
 public:
  explicit Interpreter(const FontTable& fonts) : fonts_(fonts) {}

  std::vector<GlyphRun> run(const std::vector<ContentToken>& tokens) {
    for (const ContentToken& t : tokens) {
      if (!t.is_operator) {
        operands_.push_back(t.operand);
        continue;
      }
      op_ = &t.op;
      offset_ = t.offset;
      dispatch(t.op);
      operands_.clear();
    }
    return std::move(runs_);
  }

 private:
  [[noreturn]] void bad_operands(const std::string& what) const {
    throw Error(ErrorCode::OperandError,
                "offset " + std::to_string(offset_) + ": operator " + *op_ + " " + what);
  }

  void need(std::size_t n) const {
    if (operands_.size() < n) bad_operands("expects " + std::to_string(n) + " operand(s)");
  }

  // i-th of the last n operands
  const PdfObject& arg(std::size_t n, std::size_t i) const { return operands_[operands_.size() - n + i]; }

  double num(std::size_t n, std::size_t i) const {
    const PdfObject& o = arg(n, i);
    if (!o.is_number()) bad_operands("expects a number, got " + std::string(type_name(o)));
    return o.number();
  }

  const std::string& str(std::size_t n, std::size_t i) const {
    const auto* s = arg(n, i).get_if<PdfString>();
    if (s == nullptr) bad_operands("expects a string");
    return s->bytes;
  }

  PdfTextState& ts() { return gs_.text; }

  void dispatch(const std::string& op) {
    if (op == "q") {
      stack_.push_back(gs_);
    } else if (op == "Q") {
      if (!stack_.empty()) {
        gs_ = stack_.back();
        stack_.pop_back();
      }
    } else if (op == "cm") {
      need(6);
      gs_.ctm = Matrix{num(6, 0), num(6, 1), num(6, 2), num(6, 3), num(6, 4), num(6, 5)} * gs_.ctm;
    } else if (op == "BT") {
      in_text_ = true;
      ts().tm = ts().tlm = Matrix{};
    } else if (op == "ET") {
      in_text_ = false;
    } else if (op == "Tf") {
      need(2);
      const std::string* name = arg(2, 0).name();
      if (name == nullptr) bad_operands("expects a font name");
      if (fonts_.find(*name) == fonts_.end()) {
        throw Error(ErrorCode::FontMissing, "font /" + *name + " not in page resources");
      }
      ts().font = *name;
      ts().font_size = num(2, 1);
    } else if (op == "Tc") {
      need(1);
      ts().char_spacing = num(1, 0);
    } else if (op == "Tw") {
      need(1);
      ts().word_spacing = num(1, 0);
    } else if (op == "Tz") {
      need(1);
      ts().horizontal_scale = num(1, 0) / 100.0;
    } else if (op == "TL") {
      need(1);
      ts().leading = num(1, 0);
    } else if (op == "Ts") {
      need(1);
      ts().rise = num(1, 0);
    } else if (!in_text_) {
      return;  // positioning and showing only count inside BT ... ET
    } else if (op == "Td") {
      need(2);
      move(num(2, 0), num(2, 1));
    } else if (op == "TD") {
      need(2);
      ts().leading = -num(2, 1);
      move(num(2, 0), num(2, 1));
    } else if (op == "Tm") {
      need(6);
      ts().tm = ts().tlm = Matrix{num(6, 0), num(6, 1), num(6, 2), num(6, 3), num(6, 4), num(6, 5)};
    } else if (op == "T*") {
      move(0, -ts().leading);
    } else if (op == "Tj") {
      need(1);
      show(str(1, 0));
    } else if (op == "'") {
      need(1);
      move(0, -ts().leading);
      show(str(1, 0));
    } else if (op == "\"") {
      need(3);
      ts().word_spacing = num(3, 0);
      ts().char_spacing = num(3, 1);
      move(0, -ts().leading);
      show(str(3, 2));
    } else if (op == "TJ") {
      need(1);
      const auto* arr = arg(1, 0).get_if<PdfArray>();
      if (arr == nullptr) bad_operands("expects an array");
      for (const PdfObject& e : *arr) {
        if (const auto* s = e.get_if<PdfString>()) {
          show(s->bytes);
        } else if (e.is_number()) {
          const double tx = -e.number() / 1000.0 * ts().font_size * ts().horizontal_scale;
          ts().tm = Matrix::translate(tx, 0) * ts().tm;
        } else {
          bad_operands("array holds a " + std::string(type_name(e)));
        }
      }
    }
  }

  void move(double tx, double ty) {
    ts().tlm = Matrix::translate(tx, ty) * ts().tlm;
    ts().tm = ts().tlm;
  }

  void show(const std::string& bytes) {
    if (ts().font.empty()) throw Error(ErrorCode::FontMissing, "text shown before any Tf");
    const FontInfo& font = fonts_.at(ts().font);
    const double tfs = ts().font_size;
    const double th = ts().horizontal_scale;

    Matrix trm = Matrix::translate(0, ts().rise) * ts().tm * gs_.ctm;
    GlyphRun run;
    run.origin_x = trm.e;
    run.origin_y = trm.f;
    run.font_size = std::abs(tfs) * std::hypot(trm.c, trm.d);
    double pen_x = trm.e;
    for (char ch : bytes) {
      const auto code = static_cast<unsigned char>(ch);
      const double w0 = font.width(code);
      const double tx = (w0 / 1000.0 * tfs + ts().char_spacing + (code == 32 ? ts().word_spacing : 0.0)) * th;
      ts().tm = Matrix::translate(tx, 0) * ts().tm;
      const Matrix next = Matrix::translate(0, ts().rise) * ts().tm * gs_.ctm;
      util::append_utf8(run.text, decode_code(font.encoding, code).value_or(U'\uFFFD'));
      run.glyph_advances.push_back(next.e - pen_x);
      pen_x = next.e;
    }
    run.advance_width = pen_x - run.origin_x;
    if (!bytes.empty() && run.font_size > 0) runs_.push_back(std::move(run));
  }

  const FontTable& fonts_;
  std::vector<PdfObject> operands_;
  std::vector<GraphicsState> stack_;
  GraphicsState gs_;
  bool in_text_ = false;
  const std::string* op_ = nullptr;
  std::size_t offset_ = 0;
  std::vector<GlyphRun> runs_;
};

}  // namespace

FontTable load_fonts(const PdfDict& resources, const PdfObjectTable& table) {
  FontTable out;
  const PdfDict* fonts = table.resolve_dict(resources.find("Font"));
  if (fonts == nullptr) return out;
  for (const auto& [key, value] : fonts->entries()) {
    const PdfDict* fd = table.resolve_dict(&value);
    if (fd == nullptr) continue;
    out.emplace(key, load_font(key, *fd, table));
  }
  return out;
}

std::vector<GlyphRun> interpret_text(const std::vector<ContentToken>& tokens, const FontTable& fonts) {
  return Interpreter(fonts).run(tokens);
}

std::size_t count_show_operators(const std::vector<ContentToken>& tokens) {
  std::size_t n = 0;
  for (const ContentToken& t : tokens) {
    if (t.is_operator && (t.op == "Tj" || t.op == "TJ" || t.op == "'" || t.op == "\"")) ++n;
  }
  return n;
}

}  // namespace docex::pdf
