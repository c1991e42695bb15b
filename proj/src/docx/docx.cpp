#include "docex/docx/docx.hpp"

#include <algorithm>
#include <cmath>

#include "docex/docx/xml.hpp"
#include "docex/docx/zip.hpp"
#include "docex/error.hpp"
#include "docex/util/text.hpp"

namespace docex::docx {

namespace {

constexpr std::string_view kDocumentPart = "word/document.xml";

// Text layout used for synthesized boxes, matching the PDF generator's metrics.
constexpr double kFontSize = 12.0;
constexpr double kAdvance = 6.0;
constexpr double kLeading = 14.4;
constexpr double kMargin = 72.0;

class ParagraphCollector {
 public:
  void on(const XmlEvent& ev) {
    using K = XmlEvent::Kind;
    if (ev.kind == K::text) {
      if (in_text_ > 0) sink() += ev.text;
      return;
    }
    const bool start = ev.kind == K::start;
    const std::string& n = ev.name;
    if (n == "w:t") {
      in_text_ += start ? 1 : -1;
    } else if (n == "w:tab" && start) {
      if (para_depth_ > 0) sink().push_back('\t');
    } else if ((n == "w:br" || n == "w:cr") && start) {
      if (para_depth_ > 0) sink().push_back(' ');
    } else if (n == "w:p") {
      start ? begin_paragraph() : end_paragraph();
    } else if (n == "w:tbl") {
      if (start) {
        if (++table_depth_ == 1) in_table_ = true;
      } else if (--table_depth_ == 0) {
        in_table_ = false;
      }
    } else if (n == "w:tr" && table_depth_ == 1) {
      if (start) {
        row_.clear();
      } else {
        out_.push_back(util::join(row_, "\t"));
      }
    } else if (n == "w:tc" && table_depth_ == 1) {
      if (start) row_.emplace_back();
    }
  }

  std::vector<std::string> take() { return std::move(out_); }

 private:
  std::string& sink() {
    if (in_table_ && !row_.empty()) return row_.back();
    return current_;
  }

  void begin_paragraph() {
    if (para_depth_++ > 0) return;
    if (in_table_ && !row_.empty() && !row_.back().empty()) row_.back().push_back(' ');
  }

  void end_paragraph() {
    if (--para_depth_ > 0) {
      sink().push_back(' ');  // nested paragraph (text box) ends
      return;
    }
    if (in_table_) return;  // cell paragraphs stay inside the cell
    out_.push_back(std::move(current_));
    current_.clear();
  }

  std::vector<std::string> out_;
  std::string current_;
  std::vector<std::string> row_;
  int in_text_ = 0;
  int para_depth_ = 0;
  int table_depth_ = 0;
  bool in_table_ = false;
};

}  // namespace

std::vector<std::string> extract_docx(std::string_view bytes) {
  const ZipArchive zip = ZipArchive::open(bytes);
  const ZipEntry* entry = zip.find(kDocumentPart);
  if (entry == nullptr) throw Error(ErrorCode::MissingDocumentPart, std::string(kDocumentPart) + " not in archive");
  const std::string xml = zip.read(*entry);
  ParagraphCollector collector;
  for (const XmlEvent& ev : scan_xml(xml)) collector.on(ev);
  return collector.take();
}

core::DocumentRecord docx_to_document(const std::vector<std::string>& paragraphs, std::string doc_id,
                                      std::string source_path) {
  core::DocumentRecord doc;
  doc.doc_id = std::move(doc_id);
  doc.source_path = std::move(source_path);
  doc.provenance = core::Provenance::digital;
  doc.pipeline_version = std::string(core::kPipelineVersion);

  core::Page page;
  page.unit = core::Unit::point;
  std::size_t longest = 0;
  for (const auto& p : paragraphs) longest = std::max(longest, util::utf8_length(p));
  page.width = std::max(612.0, std::ceil(2 * kMargin + kAdvance * static_cast<double>(longest)));
  page.height = std::max(792.0, std::ceil(2 * kMargin + kLeading * static_cast<double>(paragraphs.size() + 1)));

  bool new_block = true;
  for (std::size_t k = 0; k < paragraphs.size(); ++k) {
    const double baseline = kMargin + kFontSize + kLeading * static_cast<double>(k);
    const std::u32string cps = util::decode_utf8(paragraphs[k]);
    core::Line line;
    line.baseline_y = baseline;
    std::size_t i = 0;
    while (i < cps.size()) {
      if (cps[i] == U' ' || cps[i] == U'\t' || cps[i] == U'\n' || cps[i] == U'\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < cps.size() && cps[j] != U' ' && cps[j] != U'\t' && cps[j] != U'\n' && cps[j] != U'\r') ++j;
      core::Word w;
      w.text = util::encode_utf8(cps.substr(i, j - i));
      w.bbox = core::BoundingBox{kMargin + kAdvance * static_cast<double>(i), baseline - 0.8 * kFontSize,
                                 kMargin + kAdvance * static_cast<double>(j), baseline + 0.2 * kFontSize,
                                 core::Unit::point};
      w.confidence = 1.0;
      line.words.push_back(std::move(w));
      i = j;
    }
    if (line.words.empty()) {
      new_block = true;
      continue;
    }
    if (new_block) {
      page.blocks.push_back(core::Block{{}, core::BlockKind::paragraph});
      new_block = false;
    }
    page.blocks.back().lines.push_back(std::move(line));
  }
  doc.pages.push_back(std::move(page));
  core::validate(doc);
  return doc;
}

std::string make_docx(const std::vector<std::string>& paragraphs) {
  std::string body;
  for (const std::string& p : paragraphs) {
    body += "<w:p>";
    if (!p.empty()) {
      body += "<w:r>";
      std::size_t start = 0;
      while (true) {
        const std::size_t tab = p.find('\t', start);
        std::string_view piece = std::string_view(p).substr(start, tab == std::string::npos ? std::string::npos
                                                                                            : tab - start);
        if (!piece.empty()) body += "<w:t xml:space=\"preserve\">" + xml_escape(piece) + "</w:t>";
        if (tab == std::string::npos) break;
        body += "<w:tab/>";
        start = tab + 1;
      }
      body += "</w:r>";
    }
    body += "</w:p>";
  }
  const std::string document =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<w:document xmlns:w=\"http://schemas.openxmlformats.org/wordprocessingml/2006/main\"><w:body>" +
      body + "</w:body></w:document>";
  const std::string content_types =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
      "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
      "<Default Extension=\"xml\" ContentType=\"application/xml\"/>"
      "<Override PartName=\"/word/document.xml\" "
      "ContentType=\"application/vnd.openxmlformats-officedocument.wordprocessingml.document.main+xml\"/>"
      "</Types>";
  const std::string rels =
      "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
      "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
      "<Relationship Id=\"rId1\" "
      "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument\" "
      "Target=\"word/document.xml\"/></Relationships>";
  return write_zip({{"[Content_Types].xml", content_types}, {"_rels/.rels", rels}, {"word/document.xml", document}});
}

}  // namespace docex::docx
