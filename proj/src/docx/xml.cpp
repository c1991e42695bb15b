#include "docex/docx/xml.hpp"

#include <charconv>

#include "docex/error.hpp"
#include "docex/util/text.hpp"

namespace docex::docx {

namespace {

[[noreturn]] void malformed(std::size_t at, const std::string& why) {
  throw Error(ErrorCode::XmlMalformed, "offset " + std::to_string(at) + ": " + why);
}

bool is_name_char(char c) {
  return c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '>' && c != '/' && c != '=' && c != '<' &&
         c != '"' && c != '\'';
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string decode_entities(std::string_view s, std::size_t base) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos) malformed(base + i, "unterminated entity");
    std::string_view ent = s.substr(i + 1, semi - i - 1);
    if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "amp") out.push_back('&');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (ent.size() > 1 && ent[0] == '#') {
      const bool hex = ent[1] == 'x' || ent[1] == 'X';
      std::string_view digits = ent.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty() || cp > 0x10FFFF ||
          (cp >= 0xD800 && cp <= 0xDFFF)) {
        malformed(base + i, "bad character reference");
      }
      util::append_utf8(out, static_cast<char32_t>(cp));
    } else {
      malformed(base + i, "unknown entity &" + std::string(ent) + ";");
    }
    i = semi;
  }
  return out;
}

}  // namespace

std::vector<XmlEvent> scan_xml(std::string_view xml) {
  std::vector<XmlEvent> events;
  std::vector<std::string> open;
  bool root_seen = false;
  std::size_t i = xml.substr(0, 3) == "\xEF\xBB\xBF" ? 3 : 0;  // BOM
  auto push_text = [&](std::string text) {
    if (text.empty()) return;
    if (!events.empty() && events.back().kind == XmlEvent::Kind::text) {
      events.back().text += text;
    } else {
      XmlEvent ev;
      ev.text = std::move(text);
      events.push_back(std::move(ev));
    }
  };
  while (i < xml.size()) {
    if (xml[i] != '<') {
      const std::size_t lt = xml.find('<', i);
      const std::size_t end = lt == std::string_view::npos ? xml.size() : lt;
      std::string_view raw = xml.substr(i, end - i);
      if (open.empty()) {
        for (char c : raw) {
          if (!is_ws(c)) malformed(i, "character data outside the root element");
        }
      } else {
        push_text(decode_entities(raw, i));
      }
      i = end;
      continue;
    }
    std::string_view rest = xml.substr(i);
    if (rest.substr(0, 4) == "<!--") {
      const std::size_t end = xml.find("-->", i + 4);
      if (end == std::string_view::npos) malformed(i, "unterminated comment");
      i = end + 3;
    } else if (rest.substr(0, 9) == "<![CDATA[") {
      const std::size_t end = xml.find("]]>", i + 9);
      if (end == std::string_view::npos) malformed(i, "unterminated CDATA section");
      if (open.empty()) malformed(i, "CDATA outside the root element");
      push_text(std::string(xml.substr(i + 9, end - i - 9)));
      i = end + 3;
    } else if (rest.substr(0, 2) == "<?") {
      const std::size_t end = xml.find("?>", i + 2);
      if (end == std::string_view::npos) malformed(i, "unterminated processing instruction");
      i = end + 2;
    } else if (rest.substr(0, 2) == "<!") {
      const std::size_t end = xml.find('>', i + 2);
      if (end == std::string_view::npos) malformed(i, "unterminated declaration");
      if (xml.substr(i, end - i).find('[') != std::string_view::npos) malformed(i, "DOCTYPE internal subset");
      i = end + 1;
    } else if (rest.substr(0, 2) == "</") {
      std::size_t j = i + 2;
      while (j < xml.size() && is_name_char(xml[j])) ++j;
      std::string name(xml.substr(i + 2, j - i - 2));
      while (j < xml.size() && is_ws(xml[j])) ++j;
      if (j >= xml.size() || xml[j] != '>') malformed(i, "malformed end tag");
      if (open.empty() || open.back() != name) malformed(i, "unexpected end tag </" + name + ">");
      open.pop_back();
      XmlEvent ev;
      ev.kind = XmlEvent::Kind::end;
      ev.name = std::move(name);
      events.push_back(std::move(ev));
      i = j + 1;
    } else {
      const std::size_t start = i;
      std::size_t j = i + 1;
      while (j < xml.size() && is_name_char(xml[j])) ++j;
      XmlEvent ev;
      ev.kind = XmlEvent::Kind::start;
      ev.name = std::string(xml.substr(i + 1, j - i - 1));
      if (ev.name.empty()) malformed(i, "empty tag name");
      if (open.empty() && root_seen) malformed(i, "more than one root element");
      root_seen = true;
      bool self_closing = false;
      while (true) {
        while (j < xml.size() && is_ws(xml[j])) ++j;
        if (j >= xml.size()) malformed(start, "unterminated start tag");
        if (xml[j] == '>') {
          ++j;
          break;
        }
        if (xml[j] == '/') {
          if (j + 1 >= xml.size() || xml[j + 1] != '>') malformed(j, "stray '/' in tag");
          self_closing = true;
          j += 2;
          break;
        }
        const std::size_t an = j;
        while (j < xml.size() && is_name_char(xml[j])) ++j;
        if (an == j) malformed(j, "bad attribute");
        std::string attr(xml.substr(an, j - an));
        while (j < xml.size() && is_ws(xml[j])) ++j;
        if (j >= xml.size() || xml[j] != '=') malformed(j, "attribute without value");
        ++j;
        while (j < xml.size() && is_ws(xml[j])) ++j;
        if (j >= xml.size() || (xml[j] != '"' && xml[j] != '\'')) malformed(j, "unquoted attribute value");
        const char q = xml[j];
        const std::size_t close = xml.find(q, j + 1);
        if (close == std::string_view::npos) malformed(j, "unterminated attribute value");
        ev.attributes.emplace_back(std::move(attr), decode_entities(xml.substr(j + 1, close - j - 1), j + 1));
        j = close + 1;
      }
      const std::string name = ev.name;
      events.push_back(std::move(ev));
      if (self_closing) {
        XmlEvent end;
        end.kind = XmlEvent::Kind::end;
        end.name = name;
        events.push_back(std::move(end));
      } else {
        open.push_back(name);
      }
      i = j;
    }
  }
  if (!open.empty()) malformed(xml.size(), "unclosed element <" + open.back() + ">");
  if (!root_seen) malformed(0, "no root element");
  return events;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace docex::docx
