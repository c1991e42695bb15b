#include <doctest.h>

#include <cmath>

#include "docex/eval/metrics.hpp"
#include "docex/ocr/engine.hpp"
#include "docex/preprocess/bitmap_font.hpp"
#include "docex/util/text.hpp"
#include "test_support.hpp"

using namespace docex;
using docex::test::throws_code;

namespace {

ocr::EngineSpec mock(double rate, std::int64_t seed = 7) {
  ocr::EngineSpec s;
  s.name = "mock";
  s.kind = ocr::EngineKind::mock;
  s.mock_char_error_rate = rate;
  s.mock_seed = seed;
  return s;
}

ocr::EngineSpec external(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(10)) {
  ocr::EngineSpec s;
  s.name = "ext";
  s.kind = ocr::EngineKind::external_process;
  s.command_template = std::move(command);
  s.timeout = timeout;
  return s;
}

// ~10k characters of receipt-like words.
std::vector<core::Word> corpus_words(std::size_t min_chars) {
  static const char* vocab[] = {"TOTAL", "12.50", "Invoice", "qty", "COFFEE", "tax", "2023-01-02",
                                "Amount", "due", "SUGAR", "x", "Receipt", "balance", "42"};
  std::vector<core::Word> words;
  std::size_t chars = 0;
  for (std::size_t i = 0; chars < min_chars; ++i) {
    const std::string t = vocab[(i * 7 + i / 3) % 14];
    const double x = 10.0 * static_cast<double>(i % 20);
    const double y = 20.0 * static_cast<double>(i / 20);
    words.push_back(test::word(t, x, y, x + 8, y + 10));
    chars += t.size();
  }
  return words;
}

}  // namespace

TEST_CASE("engine spec validation") {
  CHECK_NOTHROW(ocr::validate(mock(0.1)));
  CHECK(throws_code([] { ocr::validate(mock(1.5)); }, ErrorCode::InvalidEngineSpec));
  auto no_seed = mock(0.1);
  no_seed.mock_seed.reset();
  CHECK(throws_code([&] { ocr::validate(no_seed); }, ErrorCode::InvalidEngineSpec));
  ocr::EngineSpec http;
  http.name = "h";
  http.kind = ocr::EngineKind::http;
  CHECK(throws_code([&] { ocr::validate(http); }, ErrorCode::InvalidEngineSpec));
  CHECK(throws_code([&] { ocr::validate(external("")); }, ErrorCode::InvalidEngineSpec));
  CHECK(throws_code([] { ocr::parse_engine_kind("tesseract"); }, ErrorCode::InvalidEngineSpec));
}

TEST_CASE("parse_engine_tsv") {
  const auto words = ocr::parse_engine_tsv("5\t1\t1\t1\t1\t1\t100\t200\t50\t20\t96.5\tTotal\n");
  REQUIRE(words.size() == 1);
  CHECK(words[0].text == "Total");
  CHECK(words[0].bbox == core::BoundingBox{100, 200, 150, 220, core::Unit::pixel});
  CHECK(words[0].confidence == doctest::Approx(0.965));

  CHECK(ocr::parse_engine_tsv("4\t1\t1\t1\t1\t0\t0\t0\t10\t10\t-1\t\n").empty());
  const std::string msg =
      test::error_message([] { ocr::parse_engine_tsv("5\t1\t1\t1\t1\t1\t100\t200\t50\t20\t96.5\n"); });
  CHECK(msg.rfind("TsvMalformed", 0) == 0);
  CHECK(msg.find("row 1") != std::string::npos);

  // header row is optional
  const auto with_header = ocr::parse_engine_tsv(
      "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext\n"
      "5\t1\t1\t1\t1\t1\t1\t2\t3\t4\t50\tx\n");
  CHECK(with_header.size() == 1);
}

TEST_CASE("TSV render then parse is the identity") {
  const auto words = corpus_words(300);
  std::vector<core::Word> scaled = words;
  for (auto& w : scaled) w.confidence = 0.5;
  CHECK(ocr::parse_engine_tsv(ocr::render_engine_tsv(scaled)) == scaled);
}

TEST_CASE("parse_http_ocr_json") {
  const auto one = ocr::parse_http_ocr_json(
      R"({"annotations":[{"text":"Hello","boundingPoly":{"vertices":[{"x":10,"y":10},{"x":60,"y":10},{"x":60,"y":30},{"x":10,"y":30}]},"confidence":0.94}]})");
  REQUIRE(one.size() == 1);
  CHECK(one[0].text == "Hello");
  CHECK(one[0].bbox == core::BoundingBox{10, 10, 60, 30, core::Unit::pixel});
  CHECK(one[0].confidence == doctest::Approx(0.94));

  const auto rotated = ocr::parse_http_ocr_json(
      R"({"annotations":[{"text":"r","boundingPoly":{"vertices":[{"x":0,"y":10},{"x":10,"y":0},{"x":20,"y":10},{"x":10,"y":20}]}}]})");
  REQUIRE(rotated.size() == 1);
  CHECK(rotated[0].bbox == core::BoundingBox{0, 0, 20, 20, core::Unit::pixel});
  CHECK(rotated[0].confidence == 1.0);

  CHECK(ocr::parse_http_ocr_json(R"({"annotations":[]})").empty());
  CHECK(throws_code([] { ocr::parse_http_ocr_json("{"); }, ErrorCode::JsonMalformed));
  CHECK(throws_code([] { ocr::parse_http_ocr_json(R"({"annotations":[{"boundingPoly":{}}]})"); },
                    ErrorCode::MissingField));
}

TEST_CASE("mock: identity channel at rate 0") {
  const std::vector<core::Word> gold{test::word("Total", 0, 0, 50, 10), test::word("12.50", 60, 0, 110, 10)};
  const auto page = ocr::mock_recognize(mock(0.0), gold, "doc");
  REQUIRE(page.words.size() == 2);
  CHECK(page.words[0].text == "Total");
  CHECK(page.words[1].text == "12.50");
  for (const auto& w : page.words) CHECK(w.confidence == doctest::Approx(0.99));
  CHECK(page.engine_name == "mock");
}

TEST_CASE("mock: determinism and keying") {
  const auto gold = corpus_words(2000);
  const auto a = ocr::mock_recognize(mock(0.2), gold, "k");
  const auto b = ocr::mock_recognize(mock(0.2), gold, "k");
  CHECK(a.words == b.words);
  const auto c = ocr::mock_recognize(mock(0.2), gold, "other");
  CHECK_FALSE(a.words == c.words);
  for (const auto& w : a.words) {
    CHECK(w.confidence >= 0.0);
    CHECK(w.confidence <= 1.0);
  }
}

TEST_CASE("mock: substitution-only, boxes copied") {
  const auto gold = corpus_words(3000);
  const auto out = ocr::mock_recognize(mock(0.3), gold, "s");
  REQUIRE(out.words.size() == gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CHECK(out.words[i].bbox == gold[i].bbox);
    CHECK(util::utf8_length(out.words[i].text) == util::utf8_length(gold[i].text));
  }
}

TEST_CASE("mock: calibration at 10k characters") {
  const auto gold = corpus_words(10'000);
  std::size_t chars = 0, char_errors = 0, word_errors = 0;
  const auto out = ocr::mock_recognize(mock(0.09, 7), gold, "calibration");
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto d = eval::char_distance(gold[i].text, out.words[i].text);
    chars += d.ref_len;
    char_errors += d.distance;
    word_errors += gold[i].text != out.words[i].text ? 1 : 0;
  }
  const double cer = static_cast<double>(char_errors) / static_cast<double>(chars);
  CHECK(cer >= 0.08);
  CHECK(cer <= 0.10);

  const auto out15 = ocr::mock_recognize(mock(0.15, 7), gold, "calibration");
  std::string ref, hyp;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ref += gold[i].text + " ";
    hyp += out15.words[i].text + " ";
  }
  CHECK(std::abs(eval::word_accuracy(eval::wer(ref, hyp)) - 0.85) <= 0.02);
  CHECK(static_cast<double>(word_errors) / static_cast<double>(gold.size()) == doctest::Approx(0.09).epsilon(0.15));
}

TEST_CASE("recognize: mock needs ground truth") {
  ocr::RecognizeContext ctx;
  CHECK(throws_code([&] { ocr::recognize(mock(0.1), preprocess::RasterImage(5, 5), ctx); },
                    ErrorCode::MissingGroundTruth));
  ctx.ground_truth = std::vector<core::Word>{test::word("a", 0, 0, 2, 2)};
  CHECK(ocr::recognize(mock(0.0), preprocess::RasterImage(5, 5), ctx).words.size() == 1);
  CHECK(throws_code([] { ocr::mock_recognize(external("true"), {}, ""); }, ErrorCode::NotMockEngine));
}

TEST_CASE("recognize: external process") {
  const preprocess::RasterImage page = preprocess::render_text({"hi"}).image;
  SUBCASE("nonzero exit") {
    const std::string msg = test::error_message([&] { ocr::recognize(external("sh -c 'exit 3'"), page); });
    CHECK(msg.rfind("EngineLaunchFailed", 0) == 0);
    CHECK(msg.find("3") != std::string::npos);
  }
  SUBCASE("missing program") {
    CHECK(throws_code([&] { ocr::recognize(external("/nonexistent/engine {input}"), page); },
                      ErrorCode::EngineLaunchFailed));
  }
  SUBCASE("timeout") {
    CHECK(throws_code([&] { ocr::recognize(external("sleep 5", std::chrono::milliseconds(200)), page); },
                      ErrorCode::Timeout));
  }
  SUBCASE("tsv output with out-of-range confidence is clamped") {
    const auto res = ocr::recognize(
        external("sh -c 'test -s {input} && printf \"5\\t1\\t1\\t1\\t1\\t1\\t1\\t2\\t3\\t4\\t150\\thi\\n\" > {output}.tsv'"),
        page);
    REQUIRE(res.words.size() == 1);
    CHECK(res.words[0].text == "hi");
    CHECK(res.words[0].confidence == 1.0);
  }
  SUBCASE("garbage output") {
    CHECK(throws_code([&] { ocr::recognize(external("sh -c 'printf \"5\\n5\\n\"'"), page); }, ErrorCode::EngineOutputUnparseable));
  }
}
