#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace docex::docx {

struct XmlEvent {
  enum class Kind { start, end, text };
  Kind kind = Kind::text;
  std::string name;  // qualified tag name for start/end
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // entity-decoded character data
};

// Minimal non-validating scanner: elements, attributes, character data,
// CDATA, comments, processing instructions and a DOCTYPE without an internal
// subset. Mismatched or unclosed tags raise XmlMalformed. Self-closing tags
// yield a start followed by an end event.
std::vector<XmlEvent> scan_xml(std::string_view xml);

std::string xml_escape(std::string_view text);

}  // namespace docex::docx
