#include <doctest.h>

#include <algorithm>
#include <random>

#include "docex/eval/fields.hpp"
#include "docex/eval/loaders.hpp"
#include "docex/eval/metrics.hpp"
#include "docex/eval/report.hpp"
#include "docex/kv/schema.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace docex;
using namespace docex::eval;
using docex::test::throws_code;

namespace {

kv::ExtractionResult prediction(const std::map<std::string, std::optional<std::string>>& values) {
  kv::ExtractionResult r;
  r.schema_name = "t";
  for (const auto& [name, v] : values) {
    kv::FieldValue fv;
    if (v) {
      fv.raw_value = *v;
      fv.normalized_value = *v;
      fv.source = kv::FieldSource::rule;
      fv.confidence = 1.0;
    }
    r.fields.emplace_back(name, fv);
  }
  return r;
}

std::string random_string(std::mt19937_64& rng, const std::string& alphabet, std::size_t max_len) {
  std::string s(rng() % (max_len + 1), ' ');
  for (char& c : s) c = alphabet[rng() % alphabet.size()];
  return s;
}

}  // namespace

TEST_CASE("levenshtein agrees with the recursive oracle on every short string pair") {
  const auto strings = oracle::all_strings("ab", 4);
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      REQUIRE(levenshtein(a, b).distance == oracle::edit_distance(a, b));
    }
  }
}

TEST_CASE("levenshtein: metric axioms on random strings") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string a = random_string(rng, "abcd", 12);
    const std::string b = random_string(rng, "abcd", 12);
    const std::string c = random_string(rng, "abcd", 12);
    const auto ab = levenshtein(a, b).distance;
    CHECK((ab == 0) == (a == b));
    CHECK(ab == levenshtein(b, a).distance);
    CHECK(levenshtein(a, c).distance <= ab + levenshtein(b, c).distance);
    CHECK(ab >= (a.size() > b.size() ? a.size() - b.size() : b.size() - a.size()));
    CHECK(ab <= std::max(a.size(), b.size()));
  }
}

TEST_CASE("cer / wer") {
  CHECK(cer("TOTAL 12.50", "T0TAL 12.50") == doctest::Approx(1.0 / 11).epsilon(1e-12));
  CHECK(wer("a b", "a c") == doctest::Approx(0.5));
  CHECK(cer("abc", "abc") == 0.0);
  CHECK(cer("ab", "abcdef") == doctest::Approx(2.0));
  CHECK(word_accuracy(wer("a b", "x y z w")) == 0.0);
  CHECK(word_accuracy(0.25) == doctest::Approx(0.75));
  // code points, not bytes
  CHECK(char_distance("caf\xC3\xA9", "cafe").distance == 1);
  CHECK(char_distance("caf\xC3\xA9", "cafe").ref_len == 4);
  CHECK(word_distance("a  b\tc", "a b c").distance == 0);
  CHECK(throws_code([] { cer("", "x"); }, ErrorCode::EmptyReference));
  CHECK(throws_code([] { wer("   ", "x"); }, ErrorCode::EmptyReference));
}

TEST_CASE("score: hand-computed cases") {
  const Scores a = score({8, 2, 2});
  CHECK(std::abs(a.precision - 0.8) < 1e-9);
  CHECK(std::abs(a.recall - 0.8) < 1e-9);
  CHECK(std::abs(a.f1 - 0.8) < 1e-9);
  CHECK(a.support == 10);
  const Scores z = score({0, 0, 0});
  CHECK(z.precision == 0.0);
  CHECK(z.recall == 0.0);
  CHECK(z.f1 == 0.0);
  const Scores b = score({3, 1, 0});
  CHECK(std::abs(b.precision - 0.75) < 1e-9);
  CHECK(std::abs(b.recall - 1.0) < 1e-9);
  CHECK(std::abs(b.f1 - 6.0 / 7.0) < 1e-9);
  CHECK(score({0, 4, 3}).f1 == 0.0);
}

TEST_CASE("match_fields") {
  const GoldMap gold{{"company", "acme"}, {"total", "12.50"}};
  const auto c = match_fields(prediction({{"company", "acme"}, {"total", "13.00"}, {"date", "2023-01-02"},
                                          {"address", std::nullopt}}),
                              gold);
  CHECK(c.at("company") == FieldCounts{1, 0, 0});
  CHECK(c.at("total") == FieldCounts{0, 1, 1});
  CHECK(c.at("date") == FieldCounts{0, 1, 0});
  CHECK(c.at("address") == FieldCounts{0, 0, 0});
  CHECK(match_fields(prediction({{"company", std::nullopt}, {"total", "12.50"}}), gold).at("company") ==
        FieldCounts{0, 0, 1});
  CHECK(throws_code([&] { match_fields(prediction({{"company", "acme"}}), gold); }, ErrorCode::SchemaMismatch));
}

TEST_CASE("f1: micro pooling is independent of document order") {
  std::mt19937_64 rng(3);
  std::vector<FieldMatchCounts> docs;
  const std::vector<std::string> names = {"company", "date", "address", "total"};
  for (int d = 0; d < 40; ++d) {
    std::map<std::string, std::optional<std::string>> pred;
    GoldMap gold;
    for (const auto& n : names) {
      const int g = static_cast<int>(rng() % 3);
      const int p = static_cast<int>(rng() % 3);
      if (g) gold[n] = "v" + std::to_string(g);
      pred[n] = p ? std::optional<std::string>("v" + std::to_string(p)) : std::nullopt;
    }
    docs.push_back(match_fields(prediction(pred), gold));
  }
  auto total = [&](const std::vector<FieldMatchCounts>& order) {
    FieldMatchCounts t;
    for (const auto& d : order) accumulate(t, d);
    return f1(t);
  };
  const F1Summary base = total(docs);
  FieldCounts pooled;
  for (const auto& d : docs)
    for (const auto& [n, c] : d) pooled += c;
  CHECK(base.micro.f1 == doctest::Approx(score(pooled).f1));
  for (int i = 0; i < 20; ++i) {
    std::shuffle(docs.begin(), docs.end(), rng);
    const F1Summary s = total(docs);
    CHECK(s.micro.f1 == base.micro.f1);
    for (const auto& [n, sc] : s.per_field) CHECK(sc.f1 == base.per_field.at(n).f1);
  }
  for (const auto& [n, sc] : base.per_field) {
    CHECK(sc.precision >= 0.0);
    CHECK(sc.precision <= 1.0);
    CHECK(sc.f1 <= 1.0);
  }
}

TEST_CASE("load_funsd_like") {
  const std::string doc = R"({"form": [
    {"id": 0, "text": "Name:", "label": "question", "box": [0,0,10,10], "linking": [[0, 1]]},
    {"id": 1, "text": "Jane", "label": "answer", "box": [20,0,40,10], "linking": [[0, 1]]},
    {"id": 2, "text": "Date of Birth:", "label": "question", "box": [0,20,10,30], "linking": [[2, 4], [2, 3]]},
    {"id": 3, "text": "1990", "label": "answer", "box": [60,20,80,30], "linking": []},
    {"id": 4, "text": "1 May", "label": "answer", "box": [20,20,50,30], "linking": []},
    {"id": 5, "text": "Notes", "label": "header", "box": [0,40,10,50], "linking": []}
  ]})";
  const FunsdGold g = load_funsd_like(doc);
  CHECK(g.fields.at("name") == "jane");
  CHECK(g.fields.at("date_of_birth") == "1 may 1990");
  CHECK(g.fields.size() == 2);
  CHECK(g.raw_text == "Name:\nJane\nDate of Birth:\n1990\n1 May\nNotes");
  CHECK(label_to_key("Date of Birth:") == "date_of_birth");
  CHECK(throws_code([] { load_funsd_like("{"); }, ErrorCode::JsonMalformed));
  CHECK(throws_code([] { load_funsd_like(R"({"form": [{"id": 0, "label": "question"}]})"); },
                    ErrorCode::MissingField));
  CHECK(throws_code([] { load_funsd_like(R"({"form": [{"id": 0, "text": "x", "label": "title"}]})"); },
                    ErrorCode::JsonMalformed));
}

TEST_CASE("load_sroie_like") {
  const GoldMap g = load_sroie_like(
      R"({"company": "ACME Trading", "date": "02/01/2023", "address": null, "total": "RM 12.5", "cashier": "x"})");
  CHECK(g.at("company") == "acme trading");
  CHECK(g.at("date") == "2023-01-02");
  CHECK(g.at("total") == "12.50");
  CHECK(g.count("address") == 0);
  CHECK(g.count("cashier") == 0);
  CHECK(load_sroie_like(R"({"date": "02/01/2023"})", kv::DateOrder::month_first).at("date") == "2023-02-01");
  CHECK(throws_code([] { load_sroie_like(R"({"total": 12})"); }, ErrorCode::JsonMalformed));
  CHECK(throws_code([] { load_sroie_like(R"({"total": "abc"})"); }, ErrorCode::UnparseableValue));
}

TEST_CASE("report: pooled tallies and formatting") {
  EngineTally t;
  t.add("TOTAL 12.50", "T0TAL 12.50");
  t.add("a b", "a c");
  const EngineRow row = t.row("mock");
  CHECK(row.docs == 2);
  CHECK(row.words == 4);
  CHECK(row.cer == doctest::Approx(2.0 / 14));
  CHECK(row.wer == doctest::Approx(2.0 / 4));
  CHECK(row.word_accuracy == doctest::Approx(0.5));

  EvalReport r;
  r.engines.push_back({"mock-vision", 3, 100, 0.06, 0.1, 0.9});
  r.engines.push_back({"mock-doctr", 3, 100, 0.09, 0.2, 0.8});
  add_field_rows(r, {{"total", {8, 2, 2}}, {"company", {3, 1, 0}}});
  const std::string csv = emit_report(r);
  CHECK(csv.rfind("engine,docs,words,cer,wer,word_accuracy\nmock-doctr,3,100,0.0900,0.2000,0.8000\n"
                  "mock-vision,3,100,0.0600,0.1000,0.9000\n\nfield,precision,recall,f1,support\n"
                  "company,0.7500,1.0000,0.8571,3\ntotal,0.8000,0.8000,0.8000,10\n",
                  0) == 0);
  CHECK(csv.find("(micro)") != std::string::npos);
  CHECK(csv.find(std::string(kLayoutFooter)) != std::string::npos);
  CHECK(csv == emit_report(r));

  const std::string ranked = emit_report(r, {ReportFormat::csv, EngineOrder::by_word_accuracy, false});
  CHECK(ranked.find("mock-vision") < ranked.find("mock-doctr"));
  CHECK(ranked.find(std::string(kLayoutFooter)) == std::string::npos);

  const std::string md = emit_report(r, {ReportFormat::markdown});
  CHECK(md.find("| engine | docs | words | cer | wer | word_accuracy |") != std::string::npos);
  CHECK(md.find("| --- |") != std::string::npos);

  const std::string empty = emit_report(EvalReport{});
  CHECK(empty.rfind("engine,docs,words,cer,wer,word_accuracy\n", 0) == 0);
  CHECK(empty.find("(micro)") == std::string::npos);

  CHECK(parse_report_format("md") == ReportFormat::markdown);
  CHECK(throws_code([] { parse_report_format("xml"); }, ErrorCode::ConfigError));
}
