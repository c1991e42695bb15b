#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "docex/pdf/object.hpp"

namespace docex::pdf {

class PdfObjectTable {
 public:
  std::map<PdfRef, PdfObject> objects;
  PdfDict trailer;

  const PdfObject* get(PdfRef ref) const;
  // Follows references (bounded chain); unresolvable ones yield null.
  const PdfObject& resolve(const PdfObject& obj) const;
  const PdfDict* resolve_dict(const PdfObject* obj) const;
};

/// Classic xref tables with /Prev chains, Flate or unfiltered streams.
PdfObjectTable parse_pdf(std::string_view bytes);

/// Applies the stream's /Filter chain (none or FlateDecode).
std::string decode_stream(const PdfStream& stream, const PdfObjectTable& table);

struct PdfPageInfo {
  double width = 0;  // points
  double height = 0;
  double origin_x = 0;  // MediaBox lower-left corner
  double origin_y = 0;
  PdfDict resources;
  std::string content;  // decoded, concatenated content streams
};

/// Page tree traversal in document order with inherited attributes.
std::vector<PdfPageInfo> collect_pages(const PdfObjectTable& table);

}  // namespace docex::pdf
