#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace docex::pipeline {

using PageLines = std::vector<std::vector<std::string>>;

/// Text per the flatten rules: lines by newline, paragraphs (split at empty
/// lines and at page breaks) by a blank line.
std::string transcript(const PageLines& pages);

/// 1-3 pages of 5-20 lines, with paragraph breaks and some Latin-1 words.
PageLines synthetic_text_pages(std::int64_t seed, int index);

struct SyntheticReceipt {
  std::vector<std::string> lines;           // printable ASCII only
  std::map<std::string, std::string> gold;  // raw values as printed
};

SyntheticReceipt synthetic_receipt(std::int64_t seed, int index);

inline constexpr double kFixtureSkewAngles[] = {-10, -5, -2, 0, 2, 5, 10};

struct FixtureSummary {
  int pdfs = 0;
  int receipts = 0;
  int invoices = 0;
  int skewed = 0;
};

// Layout under `out`:
//   pdf/doc_NNN.pdf + .txt                   synthetic text, stream variants alternate
//   receipts/receipt_NNN.png + .txt + .truth.tsv + .gold.json
//   invoices/invoice_NNN.pdf + .txt + .gold.json   receipts as digital documents
//   skew/skew_NN.png + .txt + .truth.tsv, skew/angles.json
//   schema.json, docex.toml, manifest.json
// Byte-identical for the same (seed, count). Throws OutputNotWritable.
FixtureSummary generate_fixtures(const std::filesystem::path& out, std::int64_t seed, int count);

}  // namespace docex::pipeline
