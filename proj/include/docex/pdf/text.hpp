#pragma once

#include <map>
#include <string>
#include <vector>

#include "docex/core/model.hpp"
#include "docex/pdf/document.hpp"
#include "docex/pdf/encoding.hpp"
#include "docex/pdf/lexer.hpp"

namespace docex::pdf {

inline constexpr double kDefaultGlyphWidth = 500.0;  // 1/1000 text space units

struct FontInfo {
  std::string base_font;
  BaseEncoding encoding = BaseEncoding::standard;
  int first_char = 0;
  std::vector<double> widths;  // empty: every glyph uses kDefaultGlyphWidth

  double width(unsigned char code) const noexcept;
};

using FontTable = std::map<std::string, FontInfo>;  // keyed by resource name (e.g. "F1")

/// Simple fonts only; Type0/Type3, ToUnicode and /Differences are rejected.
FontTable load_fonts(const PdfDict& resources, const PdfObjectTable& table);

struct Matrix {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  Matrix operator*(const Matrix& rhs) const noexcept;  // this applied first, then rhs
  static Matrix translate(double tx, double ty) noexcept { return Matrix{1, 0, 0, 1, tx, ty}; }
  bool operator==(const Matrix&) const = default;
};

struct PdfTextState {
  Matrix tm;
  Matrix tlm;
  std::string font;
  double font_size = 0;  // Tfs
  double char_spacing = 0;  // Tc
  double word_spacing = 0;  // Tw
  double leading = 0;  // TL
  double horizontal_scale = 1.0;  // Th
  double rise = 0;
};

struct GlyphRun {
  std::string text;  // UTF-8
  double origin_x = 0;  // user space points, bottom-left origin
  double origin_y = 0;
  double font_size = 0;  // effective size in user space
  double advance_width = 0;
  std::vector<double> glyph_advances;  // one per code point of text
};

/// Non-text operators are skipped; malformed operands raise OperandError.
std::vector<GlyphRun> interpret_text(const std::vector<ContentToken>& tokens, const FontTable& fonts);

/// Number of text-showing operators (Tj, TJ, ', ") in a token stream.
std::size_t count_show_operators(const std::vector<ContentToken>& tokens);

inline constexpr double kLineTolerance = 0.4;  // × font size
inline constexpr double kWordGap = 0.25;  // × font size
inline constexpr double kBlockGap = 1.8;  // × median line height

core::Page reconstruct_layout(const std::vector<GlyphRun>& runs, double page_width, double page_height,
                              int page_index = 0);

}  // namespace docex::pdf
