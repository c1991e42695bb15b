#include <nlohmann/json.hpp>

#include "docex/core/model.hpp"
#include "docex/error.hpp"

namespace docex::core {

using nlohmann::json;

namespace {

json to_json(const BoundingBox& b) {
  return json{{"unit", to_string(b.unit)}, {"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}};
}

json to_json(const Word& w) {
  return json{{"text", w.text}, {"bbox", to_json(w.bbox)}, {"confidence", w.confidence}};
}

json to_json(const Line& l) {
  json words = json::array();
  for (const Word& w : l.words) words.push_back(to_json(w));
  return json{{"words", std::move(words)}, {"baseline_y", l.baseline_y}};
}

json to_json(const Block& b) {
  json lines = json::array();
  for (const Line& l : b.lines) lines.push_back(to_json(l));
  return json{{"lines", std::move(lines)}, {"kind", to_string(b.kind)}};
}

json to_json(const Page& p) {
  json blocks = json::array();
  for (const Block& b : p.blocks) blocks.push_back(to_json(b));
  return json{{"index", p.index},
              {"width", p.width},
              {"height", p.height},
              {"unit", to_string(p.unit)},
              {"blocks", std::move(blocks)}};
}

// Typed accessors that report the JSON path of the first schema violation.
class Reader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaViolation, (path.empty() ? std::string("$") : path) + ": " + what);
  }

  static const json& field(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "missing field");
    return *it;
  }

  static const json& array(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_array()) fail(join(path, key), "expected array");
    return v;
  }

  static const json& object(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected object");
    return v;
  }

  static double number(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_number()) fail(join(path, key), "expected number");
    return v.get<double>();
  }

  static int integer(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_number_integer()) fail(join(path, key), "expected integer");
    return v.get<int>();
  }

  static std::string string(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_string()) fail(join(path, key), "expected string");
    return v.get<std::string>();
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }

  static std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
  }
};

Unit parse_unit(const json& obj, const std::string& path) {
  std::string s = Reader::string(obj, path, "unit");
  if (s == "pixel") return Unit::pixel;
  if (s == "point") return Unit::point;
  Reader::fail(Reader::join(path, "unit"), "unknown unit '" + s + "'");
}

Word parse_word(const json& v, const std::string& path) {
  Reader::object(v, path);
  Word w;
  w.text = Reader::string(v, path, "text");
  w.confidence = Reader::number(v, path, "confidence");
  std::string bpath = Reader::join(path, "bbox");
  const json& b = Reader::object(Reader::field(v, path, "bbox"), bpath);
  w.bbox.unit = parse_unit(b, bpath);
  w.bbox.x0 = Reader::number(b, bpath, "x0");
  w.bbox.y0 = Reader::number(b, bpath, "y0");
  w.bbox.x1 = Reader::number(b, bpath, "x1");
  w.bbox.y1 = Reader::number(b, bpath, "y1");
  return w;
}

Line parse_line(const json& v, const std::string& path) {
  Reader::object(v, path);
  Line l;
  const json& words = Reader::array(v, path, "words");
  for (std::size_t i = 0; i < words.size(); ++i) {
    l.words.push_back(parse_word(words[i], Reader::index(Reader::join(path, "words"), i)));
  }
  l.baseline_y = Reader::number(v, path, "baseline_y");
  return l;
}

Block parse_block(const json& v, const std::string& path) {
  Reader::object(v, path);
  Block b;
  const json& lines = Reader::array(v, path, "lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    b.lines.push_back(parse_line(lines[i], Reader::index(Reader::join(path, "lines"), i)));
  }
  std::string kind = Reader::string(v, path, "kind");
  if (kind == "paragraph") b.kind = BlockKind::paragraph;
  else if (kind == "table") b.kind = BlockKind::table;
  else if (kind == "header") b.kind = BlockKind::header;
  else if (kind == "unknown") b.kind = BlockKind::unknown;
  else Reader::fail(Reader::join(path, "kind"), "unknown block kind '" + kind + "'");
  return b;
}

Page parse_page(const json& v, const std::string& path) {
  Reader::object(v, path);
  Page p;
  const json& blocks = Reader::array(v, path, "blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    p.blocks.push_back(parse_block(blocks[i], Reader::index(Reader::join(path, "blocks"), i)));
  }
  p.index = Reader::integer(v, path, "index");
  p.width = Reader::number(v, path, "width");
  p.height = Reader::number(v, path, "height");
  p.unit = parse_unit(v, path);
  return p;
}

}  // namespace

std::string serialize_document(const DocumentRecord& doc) {
  json pages = json::array();
  for (const Page& p : doc.pages) pages.push_back(to_json(p));
  json j{{"doc_id", doc.doc_id},
         {"source_path", doc.source_path},
         {"provenance", to_string(doc.provenance)},
         {"engine_name", doc.engine_name ? json(*doc.engine_name) : json(nullptr)},
         {"pages", std::move(pages)},
         {"pipeline_version", doc.pipeline_version}};
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

DocumentRecord parse_document(std::string_view json_bytes) {
  json j;
  try {
    j = json::parse(json_bytes.begin(), json_bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  Reader::object(j, "");

  DocumentRecord doc;
  // pages first: a wrong container type is the most informative report.
  const json& pages = Reader::array(j, "", "pages");
  for (std::size_t i = 0; i < pages.size(); ++i) {
    doc.pages.push_back(parse_page(pages[i], Reader::index("pages", i)));
  }
  doc.doc_id = Reader::string(j, "", "doc_id");
  doc.source_path = Reader::string(j, "", "source_path");
  std::string prov = Reader::string(j, "", "provenance");
  if (prov == "scanned") doc.provenance = Provenance::scanned;
  else if (prov == "digital") doc.provenance = Provenance::digital;
  else Reader::fail("provenance", "unknown provenance '" + prov + "'");
  const json& engine = Reader::field(j, "", "engine_name");
  if (engine.is_string()) doc.engine_name = engine.get<std::string>();
  else if (!engine.is_null()) Reader::fail("engine_name", "expected string or null");
  doc.pipeline_version = Reader::string(j, "", "pipeline_version");

  validate(doc);
  return doc;
}

}  // namespace docex::core
