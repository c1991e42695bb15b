#include <doctest.h>

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>

#include "docex/docx/docx.hpp"
#include "docex/pdf/generator.hpp"
#include "docex/pipeline/commands.hpp"
#include "docex/pipeline/config.hpp"
#include "docex/pipeline/fixtures.hpp"
#include "docex/pipeline/ingest.hpp"
#include "docex/util/files.hpp"
#include "test_support.hpp"

using namespace docex;
using namespace docex::pipeline;
using docex::test::throws_code;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("docex_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = util::read_file(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("parse_config") {
  const PipelineConfig c = parse_config(R"(
seed = 7
schema = "schema.json"
date_order = "month_first"
[io]
input = "in"
[preprocess]
deskew = false
[[engines]]
name = "m"
kind = "mock"
mock_char_error_rate = 0.1
[[engines]]
name = "ext"
kind = "external_process"
command = "cat {input}"
timeout_ms = 500
[model]
endpoint_url = "http://localhost/v1"
model_name = "x"
api_key_env_var = "K"
)",
                                        "/base");
  REQUIRE(c.engines.size() == 2);
  CHECK(c.seed == 7);
  CHECK(c.engines[0].mock_seed == 7);
  CHECK(c.engines[1].kind == ocr::EngineKind::external_process);
  CHECK(c.schema_path == fs::path("/base/schema.json"));
  CHECK(c.input_path == fs::path("/base/in"));
  CHECK(c.date_order == kv::DateOrder::month_first);
  CHECK_FALSE(c.preprocess.deskew);
  CHECK(c.preprocess.binarize);
  REQUIRE(c.model);
  CHECK(c.model->model_name == "x");
  CHECK(find_engine(c, "ext").name == "ext");
  CHECK(throws_code([&] { find_engine(c, "nope"); }, ErrorCode::UnknownEngine));

  CHECK(throws_code([] { parse_config("seed = "); }, ErrorCode::ConfigError));
  CHECK(throws_code([] { parse_config("[[engines]]\nname = \"a\"\nkind = \"laser\"\n"); }, ErrorCode::ConfigError));
  CHECK(throws_code(
      [] {
        parse_config("[[engines]]\nname = \"a\"\nkind = \"mock\"\nmock_char_error_rate = 0.1\n"
                     "[[engines]]\nname = \"a\"\nkind = \"mock\"\nmock_char_error_rate = 0.2\n");
      },
      ErrorCode::ConfigError));
  CHECK(throws_code([] { parse_config("[[engines]]\nname = \"a\"\nkind = \"mock\"\nmock_char_error_rate = 2\n"); },
                    ErrorCode::ConfigError));
  CHECK(throws_code([] { load_config("/nonexistent/docex.toml"); }, ErrorCode::ConfigError));
}

TEST_CASE("transcript follows the flatten rules") {
  CHECK(transcript({{"a  b", "c"}}) == "a b\nc");
  CHECK(transcript({{"a", "", "", "b"}, {"c"}}) == "a\n\nb\n\nc");
  CHECK(transcript({{"", "a", ""}, {}, {"b"}}) == "a\n\nb");
}

TEST_CASE("synthetic fixtures are seeded") {
  CHECK(synthetic_text_pages(1, 0) == synthetic_text_pages(1, 0));
  CHECK(synthetic_text_pages(1, 0) != synthetic_text_pages(2, 0));
  for (int i = 0; i < 30; ++i) {
    const PageLines pages = synthetic_text_pages(42, i);
    CHECK(pages.size() >= 1);
    CHECK(pages.size() <= 3);
    for (const auto& page : pages) {
      CHECK(page.size() >= 5);
      CHECK(page.size() <= 20);
      CHECK_FALSE(page.front().empty());
      CHECK_FALSE(page.back().empty());
    }
    CHECK_NOTHROW(pdf::generate_pdf(pages));
  }
  const SyntheticReceipt r = synthetic_receipt(42, 3);
  CHECK(r.gold.count("total") == 1);
  CHECK(r.gold.count("company") == 1);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(200);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 5) throw Error(ErrorCode::Io, "boom");
  }));
  parallel_for(0, 2, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("ingest: classification and digital inputs") {
  CHECK(classify("a/b.PNG") == InputKind::image);
  CHECK(classify("x.pdf") == InputKind::pdf);
  CHECK(classify("x.docx") == InputKind::docx);
  CHECK(classify("x.txt") == InputKind::unsupported);

  TempDir dir("ingest");
  fs::create_directories(dir.path / "sub");
  util::write_file_atomic(dir.path / "sub/a.pdf", pdf::generate_pdf({{"Hello world"}}));
  util::write_file_atomic(dir.path / "b.docx", docx::make_docx({"Invoice 42"}));
  util::write_file_atomic(dir.path / "notes.txt", "ignored");
  const auto inputs = collect_inputs(dir.path);
  REQUIRE(inputs.size() == 2);
  CHECK(inputs[0].filename() == "b.docx");

  IngestOptions opts;
  const auto doc = ingest_document(dir.path / "sub/a.pdf", "sub/a.pdf", opts);
  CHECK(doc.doc_id == "sub/a");
  CHECK(doc.source_path == "sub/a.pdf");
  CHECK(core::flatten_text(doc) == "Hello world");

  const auto out = dir.path / "out";
  opts.schema = kv::receipt_schema();
  CHECK(process_file(dir.path / "sub/a.pdf", dir.path, out, opts).status == FileStatus::ok);
  CHECK(fs::exists(out / "sub/a.doc.json"));
  CHECK(fs::exists(out / "sub/a.kv.json"));
  CHECK(core::flatten_text(core::parse_document(util::read_file(out / "sub/a.doc.json"))) == "Hello world");

  util::write_file_atomic(dir.path / "blank.pdf", pdf::generate_pdf({{""}}));
  CHECK(process_file(dir.path / "blank.pdf", dir.path, out, opts).status == FileStatus::needs_scan);
  util::write_file_atomic(dir.path / "broken.pdf", "%PDF-1.4 nothing else");
  const FileOutcome broken = process_file(dir.path / "broken.pdf", dir.path, out, opts);
  CHECK(broken.status == FileStatus::failed);
  CHECK_FALSE(broken.message.empty());
}

TEST_CASE("commands end to end") {
  TempDir dir("cmd");
  const fs::path fx = dir.path / "fx";
  std::ostringstream log;
  REQUIRE(cmd_gen_fixtures({fx, 42, 3}, log) == kExitOk);
  CHECK(fs::exists(fx / "docex.toml"));
  CHECK(fs::exists(fx / "receipts/receipt_000.png"));
  CHECK(fs::exists(fx / "skew/angles.json"));

  SUBCASE("fixtures are byte-identical for the same seed") {
    std::ostringstream again;
    REQUIRE(cmd_gen_fixtures({dir.path / "fx2", 42, 3}, again) == kExitOk);
    CHECK(tree(fx) == tree(dir.path / "fx2"));
  }

  SUBCASE("extract then evaluate") {
    const fs::path out = dir.path / "out";
    std::ostringstream o;
    CHECK(cmd_extract({fx, fx / "docex.toml", std::string("mock-vision"), std::nullopt, out, 2}, o) == kExitOk);
    CHECK(o.str().find(" 0 failed") != std::string::npos);
    CHECK(fs::exists(out / "pdf/doc_000.doc.json"));
    CHECK(fs::exists(out / "receipts/receipt_000.kv.json"));

    std::ostringstream e;
    const fs::path report = dir.path / "report.csv";
    CHECK(cmd_evaluate({out, fx, report, eval::ReportFormat::csv}, e) == kExitOk);
    const std::string csv = util::read_file(report);
    CHECK(csv.find("digital,") != std::string::npos);
    CHECK(csv.find("digital,6,") != std::string::npos);  // 3 text PDFs + 3 invoices
    CHECK(csv.find("mock-vision,") != std::string::npos);
    CHECK(csv.find("(micro)") != std::string::npos);

    // identical text scores perfectly
    const EvaluationRun run = evaluate_directories(out / "pdf", fx / "pdf");
    REQUIRE(run.report.engines.size() == 1);
    CHECK(run.report.engines[0].cer == 0.0);
    CHECK(run.report.engines[0].word_accuracy == 1.0);
  }

  SUBCASE("exit codes") {
    std::ostringstream o;
    CHECK(cmd_extract({fx, dir.path / "missing.toml", std::nullopt, std::nullopt, dir.path / "o1", 1}, o) ==
          kExitConfig);
    CHECK(cmd_extract({fx, fx / "docex.toml", std::string("nope"), std::nullopt, dir.path / "o2", 1}, o) ==
          kExitConfig);
    fs::create_directories(dir.path / "empty");
    std::ostringstream empty;
    CHECK(cmd_extract({dir.path / "empty", fx / "docex.toml", std::nullopt, std::nullopt, dir.path / "o3", 1},
                      empty) == kExitOk);
    CHECK(empty.str().find("0 files") != std::string::npos);
    CHECK(cmd_evaluate({dir.path / "empty", fx, dir.path / "r.csv", eval::ReportFormat::csv}, o) == kExitFailure);
    CHECK(cmd_compare({fx / "receipts", {"nope"}, fx / "docex.toml", dir.path / "c.csv", eval::ReportFormat::csv, 1},
                      o) == kExitConfig);
    fs::create_directories(dir.path / "bad");
    util::write_file_atomic(dir.path / "bad/x.pdf", "%PDF-1.4 truncated");
    CHECK(cmd_extract({dir.path / "bad", fx / "docex.toml", std::nullopt, std::nullopt, dir.path / "o4", 1}, o) ==
          kExitFailure);
  }

  SUBCASE("compare ranks engines") {
    std::ostringstream o;
    const fs::path report = dir.path / "compare.md";
    CHECK(cmd_compare({fx / "receipts", {"mock-tesseract", "mock-vision"}, fx / "docex.toml", report,
                       eval::ReportFormat::markdown, 1},
                      o) == kExitOk);
    const std::string md = util::read_file(report);
    CHECK(md.find("| mock-vision |") < md.find("| mock-tesseract |"));
  }
}
