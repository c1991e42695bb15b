#include "docex/pdf/extract.hpp"

#include <nlohmann/json.hpp>

#include "docex/error.hpp"
#include "docex/pdf/document.hpp"
#include "docex/pdf/lexer.hpp"

namespace docex::pdf {

namespace {

struct Interpreted {
  PdfExtraction result;
  std::size_t show_ops = 0;
};

Interpreted interpret(std::string_view bytes) {
  const PdfObjectTable table = parse_pdf(bytes);
  Interpreted out;
  int index = 0;
  for (const PdfPageInfo& info : collect_pages(table)) {
    const FontTable fonts = load_fonts(info.resources, table);
    const auto tokens = tokenize_content(info.content);
    out.show_ops += count_show_operators(tokens);
    std::vector<GlyphRun> runs = interpret_text(tokens, fonts);
    for (GlyphRun& r : runs) {
      r.origin_x -= info.origin_x;
      r.origin_y -= info.origin_y;
    }
    out.result.pages.push_back(reconstruct_layout(runs, info.width, info.height, index++));
    out.result.runs.push_back(std::move(runs));
  }
  return out;
}

nlohmann::json object_json(const PdfObject& obj) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PdfNull>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::int64_t> ||
                             std::is_same_v<T, double>) {
          return v;
        } else if constexpr (std::is_same_v<T, PdfString>) {
          std::string printable;
          for (char c : v.bytes) printable.push_back(c >= 0x20 && c < 0x7F ? c : '.');
          return {{"string", printable}};
        } else if constexpr (std::is_same_v<T, PdfName>) {
          return "/" + v.value;
        } else if constexpr (std::is_same_v<T, PdfArray>) {
          nlohmann::json arr = nlohmann::json::array();
          for (const auto& e : v) arr.push_back(object_json(e));
          return arr;
        } else if constexpr (std::is_same_v<T, PdfDict>) {
          nlohmann::json d = nlohmann::json::object();
          for (const auto& [k, e] : v.entries()) d[k] = object_json(e);
          return d;
        } else if constexpr (std::is_same_v<T, PdfStream>) {
          nlohmann::json d = nlohmann::json::object();
          for (const auto& [k, e] : v.dict.entries()) d[k] = object_json(e);
          return {{"stream", d}, {"raw_bytes", v.raw.size()}};
        } else {
          return std::to_string(v.num) + " " + std::to_string(v.gen) + " R";
        }
      },
      obj.value());
}

}  // namespace

PdfExtraction extract_pdf(std::string_view bytes) {
  Interpreted r = interpret(bytes);
  if (r.show_ops == 0) throw Error(ErrorCode::UnsupportedFeature, "no text-show operators");
  return std::move(r.result);
}

core::DocumentRecord pdf_to_document(std::string_view bytes, std::string doc_id, std::string source_path) {
  core::DocumentRecord doc;
  doc.doc_id = std::move(doc_id);
  doc.source_path = std::move(source_path);
  doc.provenance = core::Provenance::digital;
  doc.pages = extract_pdf(bytes).pages;
  doc.pipeline_version = std::string(core::kPipelineVersion);
  core::validate(doc);
  return doc;
}

std::string dump_pdf_debug(std::string_view bytes) {
  const PdfObjectTable table = parse_pdf(bytes);
  nlohmann::json j;
  nlohmann::json objects = nlohmann::json::object();
  for (const auto& [ref, obj] : table.objects) {
    objects[std::to_string(ref.num) + " " + std::to_string(ref.gen)] = object_json(obj);
  }
  j["objects"] = objects;
  j["trailer"] = object_json(table.trailer);
  nlohmann::json pages = nlohmann::json::array();
  for (const auto& runs : interpret(bytes).result.runs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const GlyphRun& r : runs) {
      arr.push_back({{"text", r.text},
                     {"origin_x", r.origin_x},
                     {"origin_y", r.origin_y},
                     {"font_size", r.font_size},
                     {"advance_width", r.advance_width}});
    }
    pages.push_back(arr);
  }
  j["glyph_runs"] = pages;
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace docex::pdf
