// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "docex/eval/fields.hpp"
#include "docex/eval/loaders.hpp"
#include "docex/eval/metrics.hpp"
#include "docex/eval/report.hpp"
#include "docex/kv/extract.hpp"
#include "docex/kv/result.hpp"
#include "docex/pdf/extract.hpp"
#include "docex/pdf/generator.hpp"
#include "docex/pipeline/commands.hpp"
#include "docex/pipeline/config.hpp"
#include "docex/pipeline/fixtures.hpp"
#include "docex/pipeline/ingest.hpp"
#include "docex/preprocess/image_io.hpp"
#include "docex/preprocess/ops.hpp"
#include "docex/util/files.hpp"
#include "docex/util/text.hpp"
#include "oracles.hpp"

using namespace docex;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(const std::string& name, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = util::read_file(e.path());
  }
  return out;
}

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("docex_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
};

constexpr std::int64_t kSeed = 42;
constexpr int kFixtureCount = 40;

// 1. digital PDFs
Outcome digital_fidelity() {
  const auto start = Clock::now();
  int exact = 0;
  bool all_conf = true;
  for (int i = 0; i < 50; ++i) {
    const pipeline::PageLines pages = pipeline::synthetic_text_pages(kSeed, i);
    const auto variant = i % 2 ? pdf::StreamVariant::flate : pdf::StreamVariant::uncompressed;
    const std::string bytes = pdf::generate_pdf(pages, 12.0, variant);
    const core::DocumentRecord doc = pdf::pdf_to_document(bytes, "d", "d.pdf");
    const std::string ref = pipeline::transcript(pages);
    if (eval::cer(ref, core::flatten_text(doc)) == 0.0) ++exact;
    for (const auto& p : doc.pages)
      for (const auto* w : core::page_words(p)) all_conf = all_conf && w->confidence == 1.0;
  }
  const double secs = seconds_since(start);
  return {exact == 50 && all_conf && secs < 10.0,
          std::to_string(exact) + "/50 with CER 0, confidences all 1.0: " + (all_conf ? "yes" : "no") +
              fmt(", %.2f s (limit 10 s)", secs)};
}

// 2. engine comparison
Outcome engine_comparison(const fs::path& fx) {
  std::size_t chars = 0;
  for (const fs::path& p : pipeline::collect_inputs(fx)) {
    fs::path txt = p;
    txt.replace_extension(".txt");
    if (pipeline::classify(p) == pipeline::InputKind::image && fs::exists(txt))
      chars += util::utf8_length(util::read_file(txt));
  }
  const auto start = Clock::now();
  std::ostringstream log;
  const fs::path report = fx.parent_path() / "compare.csv";
  const int rc = pipeline::cmd_compare(
      {fx, {"mock-tesseract", "mock-doctr", "mock-vision"}, fx / "docex.toml", report, eval::ReportFormat::csv, 0},
      log);
  const double secs = seconds_since(start);
  const eval::EvalReport r =
      pipeline::compare_engines(fx, pipeline::load_config(fx / "docex.toml"),
                                {"mock-tesseract", "mock-doctr", "mock-vision"}, 0);
  std::map<std::string, double> acc;
  for (const auto& row : r.engines) acc[row.engine] = row.word_accuracy;
  const std::map<std::string, double> target = {{"mock-tesseract", 0.85}, {"mock-doctr", 0.91}, {"mock-vision", 0.94}};
  bool within = true;
  std::string detail = std::to_string(chars) + " chars;";
  for (const auto& [engine, t] : target) {
    within = within && std::abs(acc[engine] - t) <= 0.02;
    detail += " " + engine + fmt(" %.4f (target %.2f)", acc[engine], t) + ";";
  }
  const std::string csv = util::read_file(report);
  const bool ordered = csv.find("mock-vision") < csv.find("mock-doctr") &&
                       csv.find("mock-doctr") < csv.find("mock-tesseract");
  detail += std::string(" ranked ") + (ordered ? "vision > doctr > tesseract" : "OUT OF ORDER") +
            fmt("; %.2f s (limit 30 s)", secs);
  return {rc == 0 && chars >= 10'000 && within && ordered && secs < 30.0, detail};
}

// 3. Otsu
Outcome otsu_oracle() {
  std::mt19937_64 rng(kSeed);
  const auto start = Clock::now();
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    preprocess::Histogram h{};
    switch (i % 4) {
      case 0:
        for (auto& b : h) b = rng() % 1000;
        break;
      case 1: {  // bimodal
        const int a = static_cast<int>(rng() % 100), b = 150 + static_cast<int>(rng() % 100);
        for (int k = 0; k < 5000; ++k) {
          const int centre = rng() % 3 ? a : b;
          const int v = std::clamp(centre + static_cast<int>(rng() % 21) - 10, 0, 255);
          h[v]++;
        }
        break;
      }
      case 2:  // sparse
        for (int k = 0; k < 1 + static_cast<int>(rng() % 4); ++k) h[rng() % 256] += 1 + rng() % 50;
        break;
      default:  // large counts
        for (auto& b : h) b = rng() % 3 == 0 ? (rng() >> 20) : 0;
        if (std::all_of(h.begin(), h.end(), [](auto v) { return v == 0; })) h[7] = 1;
    }
    if (preprocess::otsu_threshold(h) == oracle::otsu(h)) ++agree;
  }
  const double secs = seconds_since(start);
  return {agree == 1000 && secs < 5.0, std::to_string(agree) + "/1000 match the exhaustive maximizer" +
                                           fmt(", %.2f s (limit 5 s)", secs)};
}

// 4. deskew over the generated skew fixtures
Outcome deskew_loop(const fs::path& fx) {
  const auto angles = nlohmann::json::parse(util::read_file(fx / "skew" / "angles.json"));
  double worst_est = 0;
  double worst_residual = 0;
  int n = 0;
  for (const auto& [file, angle] : angles.items()) {
    const preprocess::RasterImage img = preprocess::load_image(fx / "skew" / file);
    auto ink = [](const preprocess::RasterImage& r) {
      return preprocess::binarize(r, preprocess::otsu_threshold(preprocess::histogram(r)));
    };
    const preprocess::BinaryImage b = ink(img);
    const double est = preprocess::estimate_skew(b);
    const double residual = preprocess::estimate_skew(preprocess::rotate_image(b, -est));
    worst_est = std::max(worst_est, std::abs(est - angle.get<double>()));
    worst_residual = std::max(worst_residual, std::abs(residual));
    ++n;
  }
  return {n == 7 && worst_est <= 0.5 && worst_residual <= 0.5,
          std::to_string(n) + " angles; max |estimate - angle| " + fmt("%.3f deg, max residual %.3f deg (limit 0.5)",
                                                                      worst_est, worst_residual)};
}

// 5. edit distance
Outcome edit_distance_oracle() {
  const auto strings = oracle::all_strings("abc", 6);
  std::size_t pairs = 0, agree = 0;
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      ++pairs;
      if (eval::levenshtein(a, b).distance == oracle::edit_distance(a, b)) ++agree;
    }
  }
  std::mt19937_64 rng(kSeed);
  auto rnd = [&] {
    std::string s(rng() % 16, 'a');
    for (char& c : s) c = "abcde"[rng() % 5];
    return s;
  };
  int violations = 0;
  for (int i = 0; i < 10'000; ++i) {
    const std::string a = rnd(), b = rnd(), c = rnd();
    const auto ab = eval::levenshtein(a, b).distance;
    if ((ab == 0) != (a == b)) ++violations;
    if (ab != eval::levenshtein(b, a).distance) ++violations;
    if (eval::levenshtein(a, c).distance > ab + eval::levenshtein(b, c).distance) ++violations;
  }
  return {agree == pairs && violations == 0, std::to_string(agree) + "/" + std::to_string(pairs) +
                                                 " pairs agree; " + std::to_string(violations) +
                                                 " axiom violations over 10000 triples"};
}

// 6. field scoring
Outcome field_scoring() {
  const eval::Scores a = eval::score({8, 2, 2});
  const eval::Scores b = eval::score({3, 1, 0});
  const bool hand = std::abs(a.f1 - 0.8) <= 1e-9 && std::abs(b.f1 - 6.0 / 7.0) <= 1e-9 &&
                    std::abs(b.precision - 0.75) <= 1e-9 && b.recall == 1.0 && eval::score({0, 0, 0}).f1 == 0.0;
  std::mt19937_64 rng(kSeed);
  std::vector<eval::FieldMatchCounts> docs;
  for (int d = 0; d < 100; ++d) {
    eval::FieldMatchCounts c;
    for (const char* f : {"company", "date", "address", "total"}) {
      c[f] = {static_cast<std::size_t>(rng() % 3), static_cast<std::size_t>(rng() % 2),
              static_cast<std::size_t>(rng() % 2)};
    }
    docs.push_back(c);
  }
  auto micro = [](const std::vector<eval::FieldMatchCounts>& v) {
    eval::FieldMatchCounts t;
    for (const auto& d : v) eval::accumulate(t, d);
    return eval::f1(t).micro.f1;
  };
  const double base = micro(docs);
  bool stable = true;
  for (int i = 0; i < 50; ++i) {
    std::shuffle(docs.begin(), docs.end(), rng);
    stable = stable && micro(docs) == base;
  }
  return {hand && stable, fmt("F1(8,2,2)=%.12f F1(3,1,0)=%.12f; ", a.f1, b.f1) +
                              "micro-F1 identical over 50 shuffles: " + (stable ? "yes" : "no")};
}

// 7. key-value robustness on receipt text (the digital rendering of each receipt)
Outcome kv_robustness(const fs::path& fx) {
  const kv::FieldSchema schema = kv::load_schema(fx / "schema.json");
  eval::FieldMatchCounts counts;
  int complete = 0;
  int stub_runs = 0, stub_complete = 0;
  const std::vector<std::pair<std::string, kv::ModelCaller>> stubs = {
      {"prose-wrapped",
       [](const std::string&) {
         return std::string("Here you go!\n```json\n{\"company\": \"X\", \"date\": \"01/02/2023\", "
                            "\"address\": null, \"total\": \"1.00\"}\n```\nAnything else?");
       }},
      {"malformed", [](const std::string&) { return std::string("{\"company\": \"X\", \"total\": "); }},
      {"missing-fields", [](const std::string&) { return std::string("{\"company\": \"X\"}"); }},
      {"no-json", [](const std::string&) { return std::string("I cannot help with that."); }},
      {"throws", [](const std::string&) -> std::string { throw Error(ErrorCode::Timeout, "stub"); }},
  };
  for (int i = 0; i < 20; ++i) {
    char stem[64];
    std::snprintf(stem, sizeof stem, "invoices/invoice_%03d", i);
    const core::DocumentRecord doc =
        pdf::pdf_to_document(util::read_file(fx / (std::string(stem) + ".pdf")), stem, std::string(stem) + ".pdf");
    const kv::ExtractionResult r = kv::extract_kv(schema, doc);
    if (kv::is_schema_complete(r, schema)) ++complete;
    eval::accumulate(counts,
                     eval::match_fields(r, eval::load_sroie_like(util::read_file(fx / (std::string(stem) + ".gold.json")))));
    for (const auto& [name, stub] : stubs) {
      ++stub_runs;
      try {
        const kv::ExtractionResult s = kv::extract_kv(schema, doc, stub);
        kv::validate_result(s, schema);
        if (kv::is_schema_complete(s, schema)) ++stub_complete;
      } catch (const std::exception& e) {
        std::fprintf(stderr, "stub %s raised: %s\n", name.c_str(), e.what());
      }
    }
  }
  const double micro = eval::f1(counts).micro.f1;
  return {micro >= 0.90 && complete == 20 && stub_complete == stub_runs,
          fmt("rules-only micro-F1 %.4f (floor 0.90); ", micro) + std::to_string(complete) +
              "/20 schema-complete; fault stubs " + std::to_string(stub_complete) + "/" + std::to_string(stub_runs) +
              " complete without error"};
}

// full offline pipeline into `run_dir`
void offline_run(const fs::path& run_dir) {
  std::ostringstream log;
  const fs::path fx = run_dir / "fixtures";
  if (pipeline::cmd_gen_fixtures({fx, kSeed, 6}, log) != 0) throw Error(ErrorCode::Io, "gen-fixtures failed");
  if (pipeline::cmd_extract({fx, fx / "docex.toml", std::string("mock-doctr"), std::nullopt, run_dir / "out", 0},
                            log) != 0)
    throw Error(ErrorCode::Io, "extract failed: " + log.str());
  if (pipeline::cmd_evaluate({run_dir / "out", fx, run_dir / "reports" / "eval.csv", eval::ReportFormat::csv}, log) !=
      0)
    throw Error(ErrorCode::Io, "evaluate failed");
  if (pipeline::cmd_compare({fx, {"mock-tesseract", "mock-doctr", "mock-vision"}, fx / "docex.toml",
                             run_dir / "reports" / "compare.md", eval::ReportFormat::markdown, 0},
                            log) != 0)
    throw Error(ErrorCode::Io, "compare failed");
}

// 8. determinism
Outcome determinism(const fs::path& root) {
  offline_run(root / "run_a");
  offline_run(root / "run_b");
  const auto a = tree(root / "run_a");
  const auto b = tree(root / "run_b");
  std::size_t checked = 0;
  std::vector<std::string> diffs;
  for (const auto& [rel, bytes] : a) {
    const bool artifact = rel.ends_with(".doc.json") || rel.ends_with(".kv.json") || rel.rfind("reports/", 0) == 0;
    if (!artifact) continue;
    ++checked;
    auto it = b.find(rel);
    if (it == b.end() || it->second != bytes) diffs.push_back(rel);
  }
  const bool same_set = a.size() == b.size();
  return {diffs.empty() && same_set && checked > 0,
          std::to_string(checked) + " artifacts compared, " + std::to_string(diffs.size()) + " differ" +
              (diffs.empty() ? "" : " (first: " + diffs.front() + ")")};
}

// 9. confidence: digital vs scanned at rate 0.09
Outcome confidence_semantics(const fs::path& fx, const fs::path& root) {
  std::ostringstream log;
  const fs::path out = root / "confidence";
  const int rc = pipeline::cmd_extract(
      {fx, fx / "docex.toml", std::string("mock-doctr"), std::nullopt, out, 0}, log);
  double digital_sum = 0, scanned_sum = 0;
  std::size_t digital_n = 0, scanned_n = 0, digital_aligned = 0;
  bool aligned_all_one = true;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    const std::string rel = fs::relative(e.path(), out).generic_string();
    if (!rel.ends_with(".kv.json")) continue;
    const bool digital = rel.rfind("invoices/", 0) == 0;
    const bool scanned = rel.rfind("receipts/", 0) == 0;
    if (!digital && !scanned) continue;
    const kv::ExtractionResult r = kv::parse_result(util::read_file(e.path()));
    for (const auto& [name, fv] : r.fields) {
      if (!fv.present()) continue;
      if (digital) {
        digital_sum += fv.confidence;
        ++digital_n;
        if (!fv.source_spans.empty()) {
          ++digital_aligned;
          aligned_all_one = aligned_all_one && fv.confidence == 1.0;
        }
      } else {
        scanned_sum += fv.confidence;
        ++scanned_n;
      }
    }
  }
  const double dmean = digital_n ? digital_sum / static_cast<double>(digital_n) : 0;
  const double smean = scanned_n ? scanned_sum / static_cast<double>(scanned_n) : 1;
  return {rc == 0 && digital_aligned > 0 && aligned_all_one && dmean > smean,
          std::to_string(digital_aligned) + " aligned digital fields, all 1.0: " + (aligned_all_one ? "yes" : "no") +
              fmt("; mean digital %.4f vs scanned %.4f", dmean, smean)};
}

}  // namespace

int main() {
  // the fault stubs and unpaired fixtures warn by design
  spdlog::set_level(spdlog::level::err);
  Workspace ws;
  const fs::path fx = ws.root / "fixtures";
  {
    std::ostringstream log;
    if (pipeline::cmd_gen_fixtures({fx, kSeed, kFixtureCount}, log) != 0) {
      std::printf("FAIL setup: gen-fixtures failed\n");
      return 1;
    }
  }
  run("digital-parse fidelity", digital_fidelity);
  run("engine comparison", [&] { return engine_comparison(fx); });
  run("otsu oracle", otsu_oracle);
  run("deskew loop", [&] { return deskew_loop(fx); });
  run("edit-distance oracle", edit_distance_oracle);
  run("field scoring", field_scoring);
  run("key-value robustness", [&] { return kv_robustness(fx); });
  run("determinism", [&] { return determinism(ws.root); });
  run("confidence semantics", [&] { return confidence_semantics(fx, ws.root); });
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
