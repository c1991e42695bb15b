#include <algorithm>
#include <limits>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "docex/error.hpp"
#include "docex/ocr/engine.hpp"
#include "docex/util/text.hpp"

namespace docex::ocr {

using nlohmann::json;

std::vector<core::Word> parse_http_ocr_json(std::string_view body) {
  json j;
  try {
    j = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, e.what());
  }
  if (!j.is_object() || !j.contains("annotations")) throw Error(ErrorCode::MissingField, "annotations");
  const json& anns = j["annotations"];
  if (!anns.is_array()) throw Error(ErrorCode::MissingField, "annotations (expected array)");

  std::vector<core::Word> words;
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const std::string path = "annotations[" + std::to_string(i) + "]";
    const json& a = anns[i];
    if (!a.is_object() || !a.contains("text") || !a["text"].is_string()) {
      throw Error(ErrorCode::MissingField, path + ".text");
    }
    if (!a.contains("boundingPoly") || !a["boundingPoly"].is_object() ||
        !a["boundingPoly"].contains("vertices") || !a["boundingPoly"]["vertices"].is_array() ||
        a["boundingPoly"]["vertices"].empty()) {
      throw Error(ErrorCode::MissingField, path + ".boundingPoly.vertices");
    }
    std::string text = a["text"].get<std::string>();
    if (util::has_line_break(text)) {
      // Full-page summary annotations span lines; only word annotations are kept.
      spdlog::warn("skipping multi-line annotation at {}", path);
      continue;
    }
    text = util::trim(text);
    if (text.empty()) continue;

    double x0 = std::numeric_limits<double>::max(), y0 = x0;
    double x1 = std::numeric_limits<double>::lowest(), y1 = x1;
    for (const json& v : a["boundingPoly"]["vertices"]) {
      // Omitted coordinates mean zero in this response format.
      double x = v.is_object() && v.contains("x") && v["x"].is_number() ? v["x"].get<double>() : 0.0;
      double y = v.is_object() && v.contains("y") && v["y"].is_number() ? v["y"].get<double>() : 0.0;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
    core::Word w;
    w.text = std::move(text);
    w.bbox = core::BoundingBox{std::max(0.0, x0), std::max(0.0, y0), std::max(0.0, x1), std::max(0.0, y1),
                               core::Unit::pixel};
    w.confidence = a.contains("confidence") && a["confidence"].is_number() ? a["confidence"].get<double>() : 1.0;
    words.push_back(std::move(w));
  }
  return words;
}

}  // namespace docex::ocr
