#include <algorithm>
#include <set>

#include <zlib.h>

#include "docex/error.hpp"
#include "docex/pdf/document.hpp"
#include "docex/pdf/lexer.hpp"

namespace docex::pdf {

namespace {

constexpr std::size_t kMaxInflated = std::size_t{256} << 20;

[[noreturn]] void broken(const std::string& msg) { throw Error(ErrorCode::XrefBroken, msg); }

std::string ref_text(PdfRef r) { return std::to_string(r.num) + " " + std::to_string(r.gen) + " R"; }

struct XrefEntry {
  std::size_t offset = 0;
  int gen = 0;
};

class Loader {
 public:
  explicit Loader(std::string_view bytes) : bytes_(bytes) {}

  PdfObjectTable run() {
    read_xref_chain(find_startxref());
    for (const auto& [num, entry] : xref_) {
      if (num == 0) continue;
      load(PdfRef{num, entry.gen});
    }
    PdfObjectTable table;
    table.objects = std::move(objects_);
    table.trailer = std::move(trailer_);
    check_references(table);
    return table;
  }

 private:
  std::size_t find_startxref() const {
    const std::size_t at = bytes_.rfind("startxref");
    if (at == std::string_view::npos) broken("startxref not found");
    Lexer lx(bytes_, at + 9);
    Token t = lx.next();
    if (t.kind != TokenKind::integer || t.integer < 0) broken("startxref is not followed by an offset");
    if (static_cast<std::size_t>(t.integer) >= bytes_.size()) {
      broken("startxref offset " + std::to_string(t.integer) + " beyond end of file");
    }
    return static_cast<std::size_t>(t.integer);
  }

  void read_xref_chain(std::size_t offset) {
    std::set<std::size_t> visited;
    bool newest = true;
    while (true) {
      if (!visited.insert(offset).second) broken("cyclic /Prev chain at offset " + std::to_string(offset));
      PdfDict trailer = read_xref_section(offset);
      if (trailer.find("Encrypt") != nullptr) throw Error(ErrorCode::UnsupportedFeature, "encryption");
      if (trailer.find("XRefStm") != nullptr) throw Error(ErrorCode::UnsupportedFeature, "xref streams");
      const PdfObject* prev = trailer.find("Prev");
      if (newest) {
        trailer_ = trailer;
        newest = false;
      } else {
        for (const auto& [k, v] : trailer.entries()) {
          if (trailer_.find(k) == nullptr && k != "Prev") trailer_.set(k, v);
        }
      }
      if (prev == nullptr) break;
      const auto* p = prev->get_if<std::int64_t>();
      if (p == nullptr || *p < 0 || static_cast<std::size_t>(*p) >= bytes_.size()) {
        broken("invalid /Prev offset");
      }
      offset = static_cast<std::size_t>(*p);
    }
  }

  PdfDict read_xref_section(std::size_t offset) {
    Lexer lx(bytes_, offset);
    Token t = lx.next();
    if (t.kind == TokenKind::integer) {
      Token gen = lx.next();
      Token kw = lx.next();
      if (gen.kind == TokenKind::integer && kw.kind == TokenKind::keyword && kw.text == "obj") {
        throw Error(ErrorCode::UnsupportedFeature, "xref streams");
      }
    }
    if (t.kind != TokenKind::keyword || t.text != "xref") {
      broken("offset " + std::to_string(offset) + ": expected 'xref'");
    }
    while (true) {
      Token head = lx.next();
      if (head.kind == TokenKind::keyword && head.text == "trailer") break;
      Token count = lx.next();
      if (head.kind != TokenKind::integer || count.kind != TokenKind::integer || head.integer < 0 ||
          count.integer < 0) {
        broken("offset " + std::to_string(head.offset) + ": malformed xref subsection header");
      }
      for (std::int64_t i = 0; i < count.integer; ++i) {
        Token off = lx.next();
        Token gen = lx.next();
        Token kind = lx.next();
        if (off.kind != TokenKind::integer || gen.kind != TokenKind::integer || kind.kind != TokenKind::keyword ||
            (kind.text != "n" && kind.text != "f") || off.integer < 0 || gen.integer < 0 ||
            gen.integer > 65535) {
          broken("offset " + std::to_string(off.offset) + ": malformed xref entry");
        }
        const std::int64_t num = head.integer + i;
        if (num > INT32_MAX) broken("xref object number out of range");
        const int n = static_cast<int>(num);
        if (seen_.count(n) != 0) continue;  // a newer section already defined it
        seen_.insert(n);
        if (kind.text == "n") {
          if (static_cast<std::size_t>(off.integer) >= bytes_.size()) {
            broken("object " + std::to_string(n) + ": offset " + std::to_string(off.integer) +
                   " beyond end of file");
          }
          xref_[n] = XrefEntry{static_cast<std::size_t>(off.integer), static_cast<int>(gen.integer)};
        }
      }
    }
    PdfObject trailer;
    try {
      trailer = lx.parse_object(true);
    } catch (const Error& e) {
      broken(std::string("trailer: ") + e.what());
    }
    const auto* dict = trailer.get_if<PdfDict>();
    if (dict == nullptr) broken("trailer is not a dictionary");
    return *dict;
  }

  const PdfObject* load(PdfRef ref) {
    if (auto it = objects_.find(ref); it != objects_.end()) return &it->second;
    auto xit = xref_.find(ref.num);
    if (xit == xref_.end() || xit->second.gen != ref.gen) return nullptr;
    if (!loading_.insert(ref).second) broken("object " + ref_text(ref) + " refers to itself while loading");
    PdfObject obj = parse_at(ref, xit->second.offset);
    loading_.erase(ref);
    return &objects_.emplace(ref, std::move(obj)).first->second;
  }

  PdfObject parse_at(PdfRef ref, std::size_t offset) {
    Lexer lx(bytes_, offset);
    Token num = lx.next();
    Token gen = lx.next();
    Token kw = lx.next();
    if (num.kind != TokenKind::integer || gen.kind != TokenKind::integer || kw.kind != TokenKind::keyword ||
        kw.text != "obj" || num.integer != ref.num || gen.integer != ref.gen) {
      broken("offset " + std::to_string(offset) + ": expected header of object " + ref_text(ref));
    }
    PdfObject obj = lx.parse_object(true);
    Token after = lx.peek();
    if (after.kind != TokenKind::keyword || after.text != "stream") return obj;
    lx.next();
    const auto* dict = obj.get_if<PdfDict>();
    if (dict == nullptr) broken("object " + ref_text(ref) + ": stream without dictionary");
    if (const PdfObject* type = dict->find("Type")) {
      if (const std::string* n = type->name()) {
        if (*n == "ObjStm") throw Error(ErrorCode::UnsupportedFeature, "object streams");
        if (*n == "XRef") throw Error(ErrorCode::UnsupportedFeature, "xref streams");
      }
    }
    std::size_t start = lx.pos();
    if (start < bytes_.size() && bytes_[start] == '\r') ++start;
    if (start < bytes_.size() && bytes_[start] == '\n') ++start;
    PdfStream stream;
    stream.dict = *dict;
    stream.raw = std::string(stream_data(*dict, start, ref));
    return stream;
  }

  std::string_view stream_data(const PdfDict& dict, std::size_t start, PdfRef ref) {
    std::int64_t length = -1;
    if (const PdfObject* len = dict.find("Length")) {
      const PdfObject* v = len;
      if (const auto* r = len->get_if<PdfRef>()) v = load(*r);
      if (v != nullptr) {
        if (const auto* i = v->get_if<std::int64_t>()) length = *i;
      }
    }
    if (length >= 0 && static_cast<std::size_t>(length) <= bytes_.size() - start) {
      Lexer lx(bytes_, start + static_cast<std::size_t>(length));
      Token t = lx.next();
      if (t.kind == TokenKind::keyword && t.text == "endstream") {
        return bytes_.substr(start, static_cast<std::size_t>(length));
      }
    }
    // /Length missing or wrong: fall back to the endstream keyword
    const std::size_t end = bytes_.find("endstream", start);
    if (end == std::string_view::npos) broken("object " + ref_text(ref) + ": unterminated stream");
    std::size_t stop = end;
    if (stop > start && bytes_[stop - 1] == '\n') --stop;
    if (stop > start && bytes_[stop - 1] == '\r') --stop;
    return bytes_.substr(start, stop - start);
  }

  static void collect_refs(const PdfObject& obj, std::vector<PdfRef>& out) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, PdfRef>) {
            out.push_back(v);
          } else if constexpr (std::is_same_v<T, PdfArray>) {
            for (const auto& e : v) collect_refs(e, out);
          } else if constexpr (std::is_same_v<T, PdfDict>) {
            for (const auto& [k, e] : v.entries()) collect_refs(e, out);
          } else if constexpr (std::is_same_v<T, PdfStream>) {
            for (const auto& [k, e] : v.dict.entries()) collect_refs(e, out);
          }
        },
        obj.value());
  }

  static void check_references(const PdfObjectTable& table) {
    std::vector<PdfRef> refs;
    for (const auto& [ref, obj] : table.objects) collect_refs(obj, refs);
    collect_refs(PdfObject(table.trailer), refs);
    for (PdfRef r : refs) {
      if (table.objects.count(r) == 0) broken("unresolved reference " + ref_text(r));
    }
    const PdfObject* root = table.trailer.find("Root");
    if (root == nullptr) broken("trailer has no /Root");
    if (table.resolve_dict(root) == nullptr) broken("/Root is not a dictionary");
  }

  std::string_view bytes_;
  std::map<int, XrefEntry> xref_;
  std::set<int> seen_;
  PdfDict trailer_;
  std::map<PdfRef, PdfObject> objects_;
  std::set<PdfRef> loading_;
};

std::string inflate_zlib(std::string_view in) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw Error(ErrorCode::FilterUnsupported, "FlateDecode: zlib init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::string out;
  char buf[65536];
  int ret = Z_OK;
  while (true) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof buf;
    ret = inflate(&zs, Z_NO_FLUSH);
    out.append(buf, sizeof buf - zs.avail_out);
    if (ret == Z_STREAM_END) break;
    if ((ret != Z_OK && ret != Z_BUF_ERROR) || out.size() > kMaxInflated ||
        (zs.avail_in == 0 && zs.avail_out != 0)) {
      inflateEnd(&zs);
      throw Error(ErrorCode::FilterUnsupported, "FlateDecode: corrupt or truncated data");
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace

const PdfObject* PdfObjectTable::get(PdfRef ref) const {
  auto it = objects.find(ref);
  return it == objects.end() ? nullptr : &it->second;
}

const PdfObject& PdfObjectTable::resolve(const PdfObject& obj) const {
  static const PdfObject null_object;
  const PdfObject* cur = &obj;
  for (int hops = 0; hops < 32; ++hops) {
    const auto* r = cur->get_if<PdfRef>();
    if (r == nullptr) return *cur;
    cur = get(*r);
    if (cur == nullptr) return null_object;
  }
  return null_object;
}

const PdfDict* PdfObjectTable::resolve_dict(const PdfObject* obj) const {
  if (obj == nullptr) return nullptr;
  const PdfObject& v = resolve(*obj);
  if (const auto* d = v.get_if<PdfDict>()) return d;
  if (const auto* s = v.get_if<PdfStream>()) return &s->dict;
  return nullptr;
}

PdfObjectTable parse_pdf(std::string_view bytes) {
  if (bytes.substr(0, 7) != "%PDF-1.") throw Error(ErrorCode::NotAPdf, "missing %PDF-1. header");
  try {
    return Loader(bytes).run();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LexError) broken(e.what());
    throw;
  }
}

std::string decode_stream(const PdfStream& stream, const PdfObjectTable& table) {
  std::vector<std::string> filters;
  if (const PdfObject* f = stream.dict.find("Filter")) {
    const PdfObject& fv = table.resolve(*f);
    if (const std::string* n = fv.name()) {
      filters.push_back(*n);
    } else if (const auto* arr = fv.get_if<PdfArray>()) {
      for (const PdfObject& e : *arr) {
        const std::string* n = table.resolve(e).name();
        if (n == nullptr) throw Error(ErrorCode::FilterUnsupported, "non-name filter entry");
        filters.push_back(*n);
      }
    } else if (!fv.is_null()) {
      throw Error(ErrorCode::FilterUnsupported, "malformed /Filter");
    }
  }
  if (const PdfDict* parms = table.resolve_dict(stream.dict.find("DecodeParms"))) {
    if (const PdfObject* p = parms->find("Predictor"); p != nullptr && p->is_number() && p->number() > 1) {
      throw Error(ErrorCode::FilterUnsupported, "FlateDecode with predictor");
    }
  }
  std::string data = stream.raw;
  for (const std::string& f : filters) {
    if (f != "FlateDecode") throw Error(ErrorCode::FilterUnsupported, f);
    data = inflate_zlib(data);
  }
  return data;
}

namespace {

struct Inherited {
  const PdfDict* resources = nullptr;
  const PdfArray* media_box = nullptr;
};

void walk_pages(const PdfObjectTable& table, const PdfDict& node, Inherited inh, std::set<const PdfDict*>& seen,
                std::vector<PdfPageInfo>& out, int depth) {
  if (depth > 64 || !seen.insert(&node).second) broken("page tree cycle");
  if (const PdfDict* r = table.resolve_dict(node.find("Resources"))) inh.resources = r;
  if (const PdfObject* mb = node.find("MediaBox")) {
    if (const auto* arr = table.resolve(*mb).get_if<PdfArray>()) inh.media_box = arr;
  }
  const PdfObject* kids = node.find("Kids");
  const std::string* type = node.find("Type") ? table.resolve(*node.find("Type")).name() : nullptr;
  const bool is_pages = type ? *type == "Pages" : kids != nullptr;
  if (is_pages) {
    if (kids == nullptr) return;
    const auto* arr = table.resolve(*kids).get_if<PdfArray>();
    if (arr == nullptr) broken("/Kids is not an array");
    for (const PdfObject& kid : *arr) {
      const PdfDict* d = table.resolve_dict(&kid);
      if (d == nullptr) broken("page tree node is not a dictionary");
      walk_pages(table, *d, inh, seen, out, depth + 1);
    }
    return;
  }

  PdfPageInfo page;
  page.width = 612;
  page.height = 792;
  if (inh.media_box != nullptr && inh.media_box->size() == 4) {
    double v[4];
    for (int i = 0; i < 4; ++i) v[i] = table.resolve((*inh.media_box)[i]).number();
    page.origin_x = std::min(v[0], v[2]);
    page.origin_y = std::min(v[1], v[3]);
    page.width = std::abs(v[2] - v[0]);
    page.height = std::abs(v[3] - v[1]);
  }
  if (inh.resources != nullptr) page.resources = *inh.resources;
  if (const PdfObject* contents = node.find("Contents")) {
    const PdfObject& c = table.resolve(*contents);
    auto append = [&](const PdfObject& o) {
      const auto* s = table.resolve(o).get_if<PdfStream>();
      if (s == nullptr) return;
      if (!page.content.empty()) page.content.push_back('\n');
      page.content += decode_stream(*s, table);
    };
    if (const auto* arr = c.get_if<PdfArray>()) {
      for (const PdfObject& e : *arr) append(e);
    } else {
      append(c);
    }
  }
  out.push_back(std::move(page));
}

}  // namespace

std::vector<PdfPageInfo> collect_pages(const PdfObjectTable& table) {
  const PdfDict* root = table.resolve_dict(table.trailer.find("Root"));
  if (root == nullptr) broken("trailer has no /Root");
  const PdfDict* pages = table.resolve_dict(root->find("Pages"));
  if (pages == nullptr) broken("catalog has no /Pages");
  std::vector<PdfPageInfo> out;
  std::set<const PdfDict*> seen;
  walk_pages(table, *pages, Inherited{}, seen, out, 0);
  return out;
}

}  // namespace docex::pdf
