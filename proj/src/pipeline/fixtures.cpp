#include "docex/pipeline/fixtures.hpp"

#include <cstdio>
#include <random>

#include <nlohmann/json.hpp>

#include "docex/error.hpp"
#include "docex/kv/schema.hpp"
#include "docex/ocr/engine.hpp"
#include "docex/pdf/generator.hpp"
#include "docex/preprocess/bitmap_font.hpp"
#include "docex/preprocess/image_io.hpp"
#include "docex/preprocess/ops.hpp"
#include "docex/util/files.hpp"
#include "docex/util/text.hpp"

namespace docex::pipeline {

namespace fs = std::filesystem;

namespace {

// Independent stream per (seed, kind, index) so changing --count never
// changes earlier fixtures. Draws use plain modulo, which is portable where
// the standard distributions are not.
class Rng {
 public:
  Rng(std::int64_t seed, std::uint64_t kind, int index)
      : gen_(static_cast<std::uint64_t>(seed) * 0x9E3779B97F4A7C15ULL ^ (kind << 32) ^
             static_cast<std::uint64_t>(index)) {}
  int range(int lo, int hi) { return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  template <typename C>
  const auto& pick(const C& c) {
    return c[static_cast<std::size_t>(range(0, static_cast<int>(std::size(c)) - 1))];
  }
  bool chance(int percent) { return range(0, 99) < percent; }

 private:
  std::mt19937_64 gen_;
};

constexpr std::uint64_t kTextStream = 1;
constexpr std::uint64_t kReceiptStream = 2;
constexpr std::uint64_t kInvoiceStream = 3;
constexpr std::uint64_t kSkewStream = 4;

constexpr const char* kWords[] = {
    "the",     "report",   "quarterly", "invoice", "payment", "balance", "account", "summary",  "document",
    "service", "delivery", "customer",  "order",   "shipped", "within",  "terms",   "period",   "review",
    "office",  "manager",  "approved",  "signed",  "copy",    "record",  "section", "schedule", "notice",
    "policy",  "number",   "update",    "café",    "naïve",   "Müller",  "résumé",  "São",      "Zürich",
    "and",     "of",       "to",        "for",     "with",    "on",      "per",     "from",     "in"};

constexpr const char* kCompanies[] = {"ACME TRADING",  "BLUE OAK CAFE",   "SUNRISE MART",   "NORTHWIND GROCER",
                                      "GOLDEN LEAF",   "RIVERSIDE DINER", "PINE HILL FOODS", "HARBOR BOOKS",
                                      "MAPLE HARDWARE", "CITY PHARMACY"};
constexpr const char* kSuffixes[] = {"LTD", "CO", "SDN BHD", "INC", "STORE"};
constexpr const char* kStreets[] = {"MAIN", "HIGH", "KING", "LAKE", "PARK", "MILL", "CHURCH", "STATION"};
constexpr const char* kStreetKinds[] = {"ST", "ROAD", "AVE", "LANE"};
constexpr const char* kCities[] = {"SPRINGFIELD", "RIVERTON", "LAKEWOOD", "FAIRVIEW", "KUALA LUMPUR", "ASHFORD"};
constexpr const char* kItems[] = {"COFFEE", "TEA",    "BAGEL",  "MUFFIN", "NOTEBOOK", "PEN",   "BATTERY",
                                  "SOAP",   "BREAD",  "MILK",   "RICE",   "APPLES",   "CABLE", "TAPE",
                                  "GLUE",   "SALAD",  "NOODLE", "JUICE",  "WATER",    "SUGAR"};
constexpr const char* kMonths[] = {"JAN", "FEB", "MAR", "APR", "MAY", "JUN",
                                   "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};

std::string cents_to_string(long cents) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%ld.%02ld", cents / 100, cents % 100);
  return buf;
}

std::string two(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", v);
  return buf;
}

SyntheticReceipt make_receipt(Rng& rng) {
  SyntheticReceipt r;
  const std::string company = std::string(rng.pick(kCompanies)) + " " + rng.pick(kSuffixes);
  const std::string address = std::to_string(rng.range(1, 999)) + " " + rng.pick(kStreets) + " " +
                              rng.pick(kStreetKinds) + ", " + rng.pick(kCities);
  const int day = rng.range(1, 28);
  const int month = rng.range(1, 12);
  const int year = rng.range(2018, 2024);
  std::string date;
  switch (rng.range(0, 2)) {
    case 0:
      date = two(day) + "/" + two(month) + "/" + std::to_string(year);
      break;
    case 1:
      date = std::to_string(year) + "-" + two(month) + "-" + two(day);
      break;
    default:
      date = std::to_string(day) + " " + kMonths[month - 1] + " " + std::to_string(year);
      break;
  }

  r.lines.push_back("COMPANY: " + company);
  r.lines.push_back("ADDRESS: " + address);
  r.lines.push_back("DATE: " + date);
  r.lines.emplace_back();
  long subtotal = 0;
  const int items = rng.range(3, 8);
  for (int i = 0; i < items; ++i) {
    const int qty = rng.range(1, 4);
    const long price = rng.range(50, 2500);
    subtotal += qty * price;
    r.lines.push_back(std::string(rng.pick(kItems)) + " " + std::to_string(qty) + " X " + cents_to_string(price) +
                      " " + cents_to_string(qty * price));
  }
  r.lines.emplace_back();
  const long tax = subtotal * 6 / 100;
  const long total = subtotal + tax;
  r.lines.push_back("SUBTOTAL " + cents_to_string(subtotal));
  r.lines.push_back("TAX 6% " + cents_to_string(tax));
  r.lines.push_back("TOTAL: $" + cents_to_string(total));
  r.lines.emplace_back();
  r.lines.push_back("THANK YOU, COME AGAIN");

  r.gold = {{"company", company}, {"address", address}, {"date", date}, {"total", "$" + cents_to_string(total)}};
  return r;
}

std::string name3(const char* prefix, int i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03d", prefix, i);
  return buf;
}

void write(const fs::path& path, std::string_view bytes) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::OutputNotWritable, "cannot create " + path.parent_path().string());
  util::write_file_atomic(path, bytes);
}

std::string gold_json(const std::map<std::string, std::string>& gold) {
  return nlohmann::json(gold).dump(2) + "\n";
}

std::string fixture_config(std::int64_t seed) {
  return "# Mock engines stand in for three OCR engines of increasing quality.\n"
         "seed = " +
         std::to_string(seed) +
         "\n"
         "schema = \"schema.json\"\n"
         "\n"
         "[preprocess]\n"
         "binarize = true\n"
         "deskew = true\n"
         "denoise = true\n"
         "\n"
         "[[engines]]\n"
         "name = \"mock-tesseract\"\n"
         "kind = \"mock\"\n"
         "mock_char_error_rate = 0.15\n"
         "\n"
         "[[engines]]\n"
         "name = \"mock-doctr\"\n"
         "kind = \"mock\"\n"
         "mock_char_error_rate = 0.09\n"
         "\n"
         "[[engines]]\n"
         "name = \"mock-vision\"\n"
         "kind = \"mock\"\n"
         "mock_char_error_rate = 0.06\n";
}

}  // namespace

std::string transcript(const PageLines& pages) {
  std::vector<std::string> paragraphs;
  for (const auto& page : pages) {
    std::vector<std::string> current;
    auto flush = [&] {
      if (!current.empty()) paragraphs.push_back(util::join(current, "\n"));
      current.clear();
    };
    for (const std::string& line : page) {
      const std::vector<std::string> words = util::split_whitespace(line);
      if (words.empty()) flush();
      else current.push_back(util::join(words, " "));
    }
    flush();
  }
  return util::join(paragraphs, "\n\n");
}

PageLines synthetic_text_pages(std::int64_t seed, int index) {
  Rng rng(seed, kTextStream, index);
  PageLines pages(static_cast<std::size_t>(rng.range(1, 3)));
  for (auto& page : pages) {
    const int n = rng.range(5, 20);
    for (int i = 0; i < n; ++i) {
      // paragraph break, never first or last, never doubled
      if (i > 0 && i + 1 < n && !page.back().empty() && rng.chance(15)) {
        page.emplace_back();
        continue;
      }
      std::vector<std::string> words;
      const int wc = rng.range(3, 10);
      for (int w = 0; w < wc; ++w) {
        std::string word = rng.pick(kWords);
        if (rng.chance(10)) word = std::to_string(rng.range(1, 9999));
        if (w == 0 && !word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
        words.push_back(std::move(word));
      }
      if (rng.chance(50)) words.back() += rng.chance(50) ? "." : ",";
      page.push_back(util::join(words, " "));
    }
  }
  return pages;
}

SyntheticReceipt synthetic_receipt(std::int64_t seed, int index) {
  Rng rng(seed, kReceiptStream, index);
  return make_receipt(rng);
}

FixtureSummary generate_fixtures(const fs::path& out, std::int64_t seed, int count) {
  if (count < 0) throw Error(ErrorCode::ConfigError, "count must be non-negative");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw Error(ErrorCode::OutputNotWritable, "cannot create " + out.string());

  FixtureSummary summary;
  nlohmann::json manifest{{"seed", seed},          {"count", count},   {"pdfs", nlohmann::json::array()},
                          {"receipts", nlohmann::json::array()}, {"invoices", nlohmann::json::array()},
                          {"skew", nlohmann::json::array()}};

  for (int i = 0; i < count; ++i) {
    const PageLines pages = synthetic_text_pages(seed, i);
    const auto variant = i % 2 == 0 ? pdf::StreamVariant::uncompressed : pdf::StreamVariant::flate;
    const std::string stem = "pdf/" + name3("doc", i);
    write(out / (stem + ".pdf"), pdf::generate_pdf(pages, 12.0, variant));
    write(out / (stem + ".txt"), transcript(pages));
    manifest["pdfs"].push_back({{"file", stem + ".pdf"},
                                {"variant", variant == pdf::StreamVariant::flate ? "flate" : "uncompressed"},
                                {"pages", pages.size()}});
    ++summary.pdfs;
  }

  for (int i = 0; i < count; ++i) {
    const SyntheticReceipt receipt = synthetic_receipt(seed, i);
    const preprocess::RenderedPage page = preprocess::render_text(receipt.lines);
    const std::string stem = "receipts/" + name3("receipt", i);
    write(out / (stem + ".png"), preprocess::encode_png(page.image));
    write(out / (stem + ".truth.tsv"), ocr::render_engine_tsv(page.words));
    write(out / (stem + ".txt"), transcript({receipt.lines}));
    write(out / (stem + ".gold.json"), gold_json(receipt.gold));
    manifest["receipts"].push_back(stem + ".png");
    ++summary.receipts;
  }

  for (int i = 0; i < count; ++i) {
    Rng rng(seed, kInvoiceStream, i);
    const SyntheticReceipt receipt = make_receipt(rng);
    const std::string stem = "invoices/" + name3("invoice", i);
    const auto variant = i % 2 == 0 ? pdf::StreamVariant::flate : pdf::StreamVariant::uncompressed;
    write(out / (stem + ".pdf"), pdf::generate_pdf({receipt.lines}, 12.0, variant));
    write(out / (stem + ".txt"), transcript({receipt.lines}));
    write(out / (stem + ".gold.json"), gold_json(receipt.gold));
    manifest["invoices"].push_back(stem + ".pdf");
    ++summary.invoices;
  }

  if (count > 0) {
    nlohmann::json angles = nlohmann::json::object();
    int i = 0;
    for (const double angle : kFixtureSkewAngles) {
      Rng rng(seed, kSkewStream, i);
      std::vector<std::string> lines;
      for (int l = 0; l < 12; ++l) {
        std::vector<std::string> words;
        for (int w = 0; w < 6; ++w) words.push_back(util::casefold(rng.pick(kItems)));
        lines.push_back(util::join(words, " "));
      }
      preprocess::TextLayout layout;
      layout.margin = 80;
      const preprocess::RenderedPage page = preprocess::render_text(lines, layout);
      char name[32];
      std::snprintf(name, sizeof name, "skew/skew_%02d", i);
      const std::string stem = name;
      write(out / (stem + ".png"), preprocess::encode_png(preprocess::rotate_image(page.image, angle)));
      write(out / (stem + ".truth.tsv"), ocr::render_engine_tsv(page.words));
      write(out / (stem + ".txt"), transcript({lines}));
      angles[fs::path(stem).filename().string() + ".png"] = angle;
      manifest["skew"].push_back({{"file", stem + ".png"}, {"angle", angle}});
      ++summary.skewed;
      ++i;
    }
    write(out / "skew" / "angles.json", angles.dump(2) + "\n");
  }

  write(out / "schema.json", kv::serialize_schema(kv::receipt_schema()));
  write(out / "docex.toml", fixture_config(seed));
  write(out / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace docex::pipeline
