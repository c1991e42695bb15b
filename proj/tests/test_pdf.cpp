#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <zlib.h>

#include "docex/pdf/document.hpp"
#include "docex/pdf/encoding.hpp"
#include "docex/pdf/extract.hpp"
#include "docex/pdf/generator.hpp"
#include "docex/pdf/lexer.hpp"
#include "docex/pdf/text.hpp"
#include "docex/pipeline/fixtures.hpp"
#include "docex/util/text.hpp"
#include "test_support.hpp"

using namespace docex;
using namespace docex::pdf;
using docex::test::throws_code;

namespace {

// Hand-assembled classic-xref PDF. Object i+1 has body objects[i].
std::string build_pdf(const std::vector<std::string>& objects, const std::string& trailer_extra = "") {
  std::string out = "%PDF-1.4\n";
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    offsets.push_back(out.size());
    out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
  }
  const std::size_t xref = out.size();
  out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
  for (std::size_t off : offsets) {
    char line[32];
    std::snprintf(line, sizeof line, "%010zu 00000 n \n", off);
    out += line;
  }
  out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) + " /Root 1 0 R " + trailer_extra +
         ">>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
  return out;
}

// Incremental update replacing / adding objects, chained with /Prev.
std::string append_update(const std::string& base, const std::map<int, std::string>& objects, int size) {
  const std::size_t prev_pos = base.rfind("startxref");
  const std::string prev = base.substr(prev_pos + 10, base.find('\n', prev_pos + 10) - prev_pos - 10);
  std::string out = base;
  std::map<int, std::size_t> offsets;
  for (const auto& [num, body] : objects) {
    offsets[num] = out.size();
    out += std::to_string(num) + " 0 obj\n" + body + "\nendobj\n";
  }
  const std::size_t xref = out.size();
  out += "xref\n";
  for (const auto& [num, off] : offsets) {
    char line[32];
    std::snprintf(line, sizeof line, "%010zu 00000 n \n", off);
    out += std::to_string(num) + " 1\n" + line;
  }
  out += "trailer\n<< /Size " + std::to_string(size) + " /Root 1 0 R /Prev " + prev + " >>\nstartxref\n" +
         std::to_string(xref) + "\n%%EOF\n";
  return out;
}

std::string stream_obj(const std::string& data, const std::string& extra = "") {
  return "<< /Length " + std::to_string(data.size()) + " " + extra + ">>\nstream\n" + data + "\nendstream";
}

const std::string kHelvetica = "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /Encoding /WinAnsiEncoding >>";

// Catalog, Pages, one Page with font F1 (obj 4) and the given content (obj 5).
std::vector<std::string> one_page(const std::string& content, const std::string& font = kHelvetica,
                                  const std::string& mediabox = "[0 0 612 792]") {
  return {"<< /Type /Catalog /Pages 2 0 R >>", "<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
          "<< /Type /Page /Parent 2 0 R /MediaBox " + mediabox +
              " /Resources << /Font << /F1 4 0 R >> >> /Contents 5 0 R >>",
          font, stream_obj(content)};
}

FontTable helvetica_500() {
  FontInfo f;
  f.base_font = "Helvetica";
  f.encoding = BaseEncoding::win_ansi;
  return {{"F1", f}};
}

std::vector<GlyphRun> run_content(const std::string& content, const FontTable& fonts = helvetica_500()) {
  return interpret_text(tokenize_content(content), fonts);
}

std::string flatten(const std::string& pdf_bytes) {
  return core::flatten_text(pdf_to_document(pdf_bytes, "d", "d.pdf"));
}

std::u32string supported_alphabet() {
  std::u32string out;
  for (char32_t cp = 0x20; cp <= 0xFF; ++cp) {
    if (generator_supports(cp)) out.push_back(cp);
  }
  for (char32_t cp : {U'\u20AC', U'\u2018', U'\u2019', U'\u201C', U'\u201D', U'\u2022', U'\u2013', U'\u2014'}) {
    if (generator_supports(cp)) out.push_back(cp);
  }
  return out;
}

}  // namespace

TEST_CASE("parse_pdf: generated document has the expected objects") {
  const PdfObjectTable table = parse_pdf(generate_pdf({{"Hello"}}));
  std::map<std::string, int> types;
  int streams = 0;
  for (const auto& [ref, obj] : table.objects) {
    if (const auto* d = obj.get_if<PdfDict>()) {
      if (const PdfObject* t = d->find("Type"); t && t->name()) types[*t->name()]++;
    }
    if (obj.is<PdfStream>()) ++streams;
  }
  CHECK(types["Catalog"] == 1);
  CHECK(types["Pages"] == 1);
  CHECK(types["Page"] == 1);
  CHECK(types["Font"] == 1);
  CHECK(streams == 1);
  CHECK(table.trailer.find("Root") != nullptr);
}

TEST_CASE("parse_pdf: rejections") {
  CHECK(throws_code([] { parse_pdf("hello"); }, ErrorCode::NotAPdf));
  CHECK(throws_code([] { parse_pdf(build_pdf(one_page("BT ET"), "/Encrypt << /Filter /Standard >> ")); },
                    ErrorCode::UnsupportedFeature));
  CHECK(test::error_message([] { parse_pdf(build_pdf(one_page("BT ET"), "/Encrypt << >> ")); }).find("encryption") !=
        std::string::npos);

  auto objs = one_page("BT ET");
  objs.push_back(stream_obj("1 0", "/Type /ObjStm /N 1 /First 4 "));
  CHECK(test::error_message([&] { parse_pdf(build_pdf(objs)); }).find("object streams") != std::string::npos);

  auto dangling = one_page("BT ET");
  dangling[0] = "<< /Type /Catalog /Pages 2 0 R /Extra 42 0 R >>";
  CHECK(throws_code([&] { parse_pdf(build_pdf(dangling)); }, ErrorCode::XrefBroken));

  std::string truncated = generate_pdf({{"x"}});
  truncated.resize(truncated.size() / 2);
  CHECK(throws_code([&] { parse_pdf(truncated); }, ErrorCode::XrefBroken));
}

TEST_CASE("parse_pdf: incremental update wins over the original") {
  const std::string base = build_pdf(one_page("BT /F1 12 Tf 72 720 Td (old) Tj ET"));
  const std::string updated = append_update(base, {{5, stream_obj("BT /F1 12 Tf 72 720 Td (new) Tj ET")}}, 6);
  CHECK(flatten(base) == "old");
  CHECK(flatten(updated) == "new");
}

TEST_CASE("decode_stream: filters") {
  PdfObjectTable empty;
  PdfStream s;
  s.raw = "plain";
  CHECK(decode_stream(s, empty) == "plain");

  const std::string text = "BT (zipped) Tj ET";
  uLongf len = compressBound(text.size());
  std::string z(len, '\0');
  compress(reinterpret_cast<Bytef*>(z.data()), &len, reinterpret_cast<const Bytef*>(text.data()), text.size());
  z.resize(len);
  PdfStream f;
  f.dict.set("Filter", PdfObject(PdfName{"FlateDecode"}));
  f.raw = z;
  CHECK(decode_stream(f, empty) == text);

  PdfStream lzw;
  lzw.dict.set("Filter", PdfObject(PdfName{"LZWDecode"}));
  CHECK(throws_code([&] { decode_stream(lzw, empty); }, ErrorCode::FilterUnsupported));
  CHECK(test::error_message([&] { decode_stream(lzw, empty); }).find("LZWDecode") != std::string::npos);

  PdfStream bad;
  bad.dict.set("Filter", PdfObject(PdfName{"FlateDecode"}));
  bad.raw = "not zlib";
  CHECK(throws_code([&] { decode_stream(bad, empty); }, ErrorCode::FilterUnsupported));
}

TEST_CASE("tokenize_content") {
  const auto toks = tokenize_content("BT /F1 12 Tf 72 720 Td (Hello) Tj ET");
  std::vector<std::string> ops;
  for (const auto& t : toks) {
    if (t.is_operator) ops.push_back(t.op);
  }
  CHECK(toks.size() == 10);
  CHECK(ops == std::vector<std::string>{"BT", "Tf", "Td", "Tj", "ET"});
  CHECK(*toks[1].operand.name() == "F1");
  CHECK(toks[2].operand.number() == 12);

  const auto s = tokenize_content(R"((a\(b\)c))");
  REQUIRE(s.size() == 1);
  CHECK(s[0].operand.get_if<PdfString>()->bytes == "a(b)c");

  const std::string msg = test::error_message([] { tokenize_content("  (unbalanced"); });
  CHECK(msg.rfind("LexError", 0) == 0);
  CHECK(msg.find("offset 2") != std::string::npos);

  const auto hex = tokenize_content("<48656C6C6F> <414>");
  CHECK(hex[0].operand.get_if<PdfString>()->bytes == "Hello");
  CHECK(hex[1].operand.get_if<PdfString>()->bytes == std::string("A@"));

  const auto octal = tokenize_content(R"((\101\102\
C))");
  CHECK(octal[0].operand.get_if<PdfString>()->bytes == "ABC");
}

TEST_CASE("tokenize_content: totality over random bytes") {
  std::mt19937_64 rng(77);
  const std::string alphabet = "()<>[]{}/\\%0123456789.+-abcBTETj \n\r\t#";
  for (int trial = 0; trial < 3000; ++trial) {
    std::string s;
    const int n = static_cast<int>(rng() % 64);
    for (int i = 0; i < n; ++i) {
      s += trial % 2 ? static_cast<char>(rng() & 0xFF) : alphabet[rng() % alphabet.size()];
    }
    try {
      tokenize_content(s);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LexError);
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
  }
}

TEST_CASE("interpret_text: operator semantics") {
  const auto runs = run_content("BT /F1 12 Tf 72 720 Td (Hi) Tj ET");
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].text == "Hi");
  CHECK(runs[0].origin_x == doctest::Approx(72));
  CHECK(runs[0].origin_y == doctest::Approx(720));
  CHECK(runs[0].font_size == doctest::Approx(12));
  CHECK(runs[0].advance_width == doctest::Approx(12));

  const auto td = run_content("BT /F1 12 Tf 72 720 Td (a) Tj 0 -14 Td (b) Tj ET");
  REQUIRE(td.size() == 2);
  CHECK(td[1].origin_y == doctest::Approx(td[0].origin_y - 14));
  CHECK(td[1].origin_x == doctest::Approx(72));

  // TJ: a number n displaces the pen by -n/1000 * Tfs * Th
  const auto plain = run_content("BT /F1 12 Tf 0 0 Td [(A) (B)] TJ ET");
  const auto kerned = run_content("BT /F1 12 Tf 0 0 Td [(A) -120 (B)] TJ ET");
  REQUIRE(plain.size() == 2);
  REQUIRE(kerned.size() == 2);
  CHECK(kerned[1].origin_x - plain[1].origin_x == doctest::Approx(1.44));

  const auto spacing = run_content("BT /F1 10 Tf 2 Tc 3 Tw 50 Tz (a b) Tj ET");
  REQUIRE(spacing.size() == 1);
  // (5 + 2) * 0.5, (5 + 2 + 3) * 0.5, (5 + 2) * 0.5
  CHECK(spacing[0].advance_width == doctest::Approx(3.5 + 5 + 3.5));

  const auto cm = run_content("2 0 0 2 10 20 cm BT /F1 6 Tf 5 5 Td (x) Tj ET");
  REQUIRE(cm.size() == 1);
  CHECK(cm[0].origin_x == doctest::Approx(20));
  CHECK(cm[0].origin_y == doctest::Approx(30));
  CHECK(cm[0].font_size == doctest::Approx(12));

  const auto leading = run_content("BT /F1 12 Tf 14 TL 72 720 Td (a) Tj T* (b) Tj (c) ' ET");
  REQUIRE(leading.size() == 3);
  CHECK(leading[1].origin_y == doctest::Approx(706));
  CHECK(leading[2].origin_y == doctest::Approx(692));
}

TEST_CASE("interpret_text: errors and skipped operators") {
  CHECK(throws_code([] { run_content("BT /F9 12 Tf (x) Tj ET"); }, ErrorCode::FontMissing));
  CHECK(throws_code([] { run_content("BT (x) Tj ET"); }, ErrorCode::FontMissing));
  CHECK(throws_code([] { run_content("BT /F1 Tf ET"); }, ErrorCode::OperandError));
  CHECK(throws_code([] { run_content("BT /F1 12 Tf (a) 3 Td ET"); }, ErrorCode::OperandError));
  // graphics operators are ignored
  CHECK(run_content("0 0 m 10 10 l S 1 0 0 RG BT /F1 12 Tf (ok) Tj ET re f").size() == 1);
}

TEST_CASE("interpret_text: pen position is a deterministic function of the input") {
  const std::string content = "BT /F1 11 Tf 1 0 0 1 40 500 Tm (abc) Tj [(d) 250 (ef)] TJ 0 -13 Td (g h) Tj ET";
  const auto a = run_content(content);
  const auto b = run_content(content);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].origin_x == b[i].origin_x);
    CHECK(a[i].origin_y == b[i].origin_y);
    CHECK(a[i].glyph_advances == b[i].glyph_advances);
  }
}

TEST_CASE("fonts: declared subset") {
  CHECK(flatten(build_pdf(one_page("BT /F1 12 Tf 72 700 Td (plain) Tj ET"))) == "plain");
  CHECK(throws_code(
      [] { extract_pdf(build_pdf(one_page("BT /F1 12 Tf (x) Tj ET", "<< /Type /Font /Subtype /Type0 >>"))); },
      ErrorCode::UnsupportedFeature));
  CHECK(throws_code(
      [] {
        extract_pdf(build_pdf(
            one_page("BT /F1 12 Tf (x) Tj ET", "<< /Type /Font /Subtype /Type1 /ToUnicode 1 0 R >>")));
      },
      ErrorCode::UnsupportedFeature));
  CHECK(decode_code(BaseEncoding::win_ansi, 0x80) == U'€');
  CHECK(decode_code(BaseEncoding::win_ansi, 0xE9) == U'é');
  CHECK(decode_code(BaseEncoding::standard, 0x27) == U'’');
  for (int c = 0x20; c < 0x100; ++c) {
    const auto cp = decode_code(BaseEncoding::win_ansi, static_cast<unsigned char>(c));
    if (cp) CHECK(encode_code(BaseEncoding::win_ansi, *cp) == static_cast<unsigned char>(c));
  }
}

TEST_CASE("extract: page geometry and origin") {
  const std::string pdf = build_pdf(one_page("BT /F1 10 Tf 100 150 Td (shifted) Tj ET", kHelvetica,
                                             "[50 50 350 250]"));
  const auto ex = extract_pdf(pdf);
  REQUIRE(ex.pages.size() == 1);
  CHECK(ex.pages[0].width == doctest::Approx(300));
  CHECK(ex.pages[0].height == doctest::Approx(200));
  const auto words = core::page_words(ex.pages[0]);
  REQUIRE(words.size() == 1);
  CHECK(words[0]->bbox.x0 == doctest::Approx(50));
  CHECK(words[0]->bbox.unit == core::Unit::point);
  // baseline 100 above the bottom of a 200 pt page
  CHECK(words[0]->bbox.y1 == doctest::Approx(102));
}

TEST_CASE("extract: image-only PDF has no text layer") {
  const std::string msg = test::error_message([] { extract_pdf(generate_pdf({{""}})); });
  CHECK(msg.rfind("UnsupportedFeature", 0) == 0);
  CHECK(msg.find("no text-show operators") != std::string::npos);
}

TEST_CASE("reconstruct_layout") {
  CHECK(reconstruct_layout({}, 612, 792).blocks.empty());

  auto run = [](std::string text, double x, double y, double size = 12) {
    GlyphRun r;
    r.text = std::move(text);
    r.origin_x = x;
    r.origin_y = y;
    r.font_size = size;
    const auto cps = util::decode_utf8(r.text);
    r.glyph_advances.assign(cps.size(), size * 0.5);
    r.advance_width = size * 0.5 * static_cast<double>(cps.size());
    return r;
  };
  // gap 0.1 x size and no space glyph: one word
  auto joined = reconstruct_layout({run("ab", 72, 700), run("cd", 72 + 12 + 1.2, 700)}, 612, 792);
  CHECK(core::page_words(joined).size() == 1);
  CHECK(core::page_words(joined)[0]->text == "abcd");
  // a space glyph splits
  auto split = reconstruct_layout({run("ab cd", 72, 700)}, 612, 792);
  CHECK(core::page_words(split).size() == 2);
  // gap above 0.25 x size splits
  CHECK(core::page_words(reconstruct_layout({run("ab", 72, 700), run("cd", 72 + 12 + 4, 700)}, 612, 792)).size() ==
        2);
  // 720 vs 706 at size 12: two lines, one block
  auto lines = reconstruct_layout({run("top", 72, 720), run("next", 72, 706)}, 612, 792);
  REQUIRE(lines.blocks.size() == 1);
  CHECK(lines.blocks[0].lines.size() == 2);
  // a gap above 1.8 x line size starts a block
  auto blocks = reconstruct_layout({run("top", 72, 720), run("far", 72, 690)}, 612, 792);
  CHECK(blocks.blocks.size() == 2);
  for (const auto* w : core::page_words(blocks)) CHECK(w->confidence == 1.0);
}

TEST_CASE("reconstruct_layout: permutation invariant") {
  const auto runs = run_content(
      "BT /F1 12 Tf 72 720 Td (Alpha beta) Tj ( gamma) Tj 0 -14 Td (delta) Tj 0 -30 Td [(eps) -300 (zeta)] TJ ET");
  const core::Page expected = reconstruct_layout(runs, 612, 792);
  std::mt19937 rng(4);
  auto shuffled = runs;
  for (int i = 0; i < 30; ++i) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(reconstruct_layout(shuffled, 612, 792) == expected);
  }
}

TEST_CASE("generate_pdf: roundtrip") {
  CHECK(flatten(generate_pdf({{"Hello world"}})) == "Hello world");
  CHECK(throws_code([] { generate_pdf({{"bad \xE6\x97\xA5"}}); }, ErrorCode::UnsupportedCharacter));
  CHECK(test::error_message([] { generate_pdf({{"bad \xE6\x97\xA5"}}); }).find("U+65E5") != std::string::npos);
  CHECK(generate_pdf({{"a"}, {"b"}}) == generate_pdf({{"a"}, {"b"}}));
}

TEST_CASE("generate_pdf: random corpora roundtrip with CER 0") {
  const std::u32string alphabet = supported_alphabet();
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    pipeline::PageLines pages(3);
    for (auto& page : pages) {
      for (int l = 0; l < 20; ++l) {
        std::u32string line;
        const int n = static_cast<int>(rng() % 50);
        for (int c = 0; c < n; ++c) line.push_back(alphabet[rng() % alphabet.size()]);
        page.push_back(util::encode_utf8(line));
      }
    }
    const auto variant = trial % 2 ? StreamVariant::flate : StreamVariant::uncompressed;
    const std::string bytes = generate_pdf(pages, 12.0, variant);
    CHECK_NOTHROW(parse_pdf(bytes));
    CHECK(flatten(bytes) == pipeline::transcript(pages));
  }
}

TEST_CASE("dump_pdf_debug lists objects and runs") {
  const std::string dump = dump_pdf_debug(generate_pdf({{"Hi there"}}));
  CHECK(dump.find("glyph_runs") != std::string::npos);
  CHECK(dump.find("Hi there") != std::string::npos);
}
