#include "docex/eval/loaders.hpp"

#include <map>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "docex/error.hpp"
#include "docex/kv/schema.hpp"
#include "docex/util/text.hpp"

namespace docex::eval {

namespace {

nlohmann::json parse_json(std::string_view text, std::string_view what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, std::string(what) + ": " + e.what());
  }
}

const nlohmann::json& member(const nlohmann::json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::MissingField, path + "." + key);
  return obj[key];
}

}  // namespace

std::string label_to_key(std::string_view label) {
  const std::string s = util::strip_edge_punctuation(util::casefold(label));
  std::string out;
  bool pending = false;
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if ((u >= 'a' && u <= 'z') || (u >= '0' && u <= '9') || u >= 0x80) {
      if (pending && !out.empty()) out += '_';
      pending = false;
      out += c;
    } else {
      pending = true;
    }
  }
  return out;
}

FunsdGold load_funsd_like(std::string_view json) {
  const nlohmann::json j = parse_json(json, "funsd annotation");
  const nlohmann::json& form = member(j, "form", "$");
  if (!form.is_array()) throw Error(ErrorCode::JsonMalformed, "$.form is not an array");

  struct Entity {
    std::string text;
    std::string label;
    std::vector<std::pair<long long, long long>> links;
  };
  std::vector<long long> order;
  std::map<long long, Entity> entities;
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < form.size(); ++i) {
    const std::string path = "$.form[" + std::to_string(i) + "]";
    const nlohmann::json& e = form[i];
    const nlohmann::json& id = member(e, "id", path);
    const nlohmann::json& text = member(e, "text", path);
    const nlohmann::json& label = member(e, "label", path);
    if (!id.is_number_integer() || !text.is_string() || !label.is_string()) {
      throw Error(ErrorCode::JsonMalformed, path + ": id, text or label has the wrong type");
    }
    Entity ent{text.get<std::string>(), label.get<std::string>(), {}};
    if (ent.label != "question" && ent.label != "answer" && ent.label != "header" && ent.label != "other") {
      throw Error(ErrorCode::JsonMalformed, path + ".label: unknown label '" + ent.label + "'");
    }
    if (e.contains("linking")) {
      const nlohmann::json& links = e["linking"];
      if (!links.is_array()) throw Error(ErrorCode::JsonMalformed, path + ".linking is not an array");
      for (const auto& l : links) {
        if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer()) {
          throw Error(ErrorCode::JsonMalformed, path + ".linking: expected [from, to] pairs");
        }
        ent.links.emplace_back(l[0].get<long long>(), l[1].get<long long>());
      }
    }
    if (!util::trim(ent.text).empty()) lines.push_back(ent.text);
    const long long key = id.get<long long>();
    if (!entities.emplace(key, std::move(ent)).second) {
      throw Error(ErrorCode::JsonMalformed, path + ": duplicate id " + std::to_string(key));
    }
    order.push_back(key);
  }

  FunsdGold gold;
  gold.raw_text = util::join(lines, "\n");
  for (const long long qid : order) {
    const Entity& q = entities.at(qid);
    if (q.label != "question") continue;
    std::vector<std::string> answers;
    for (const auto& [from, to] : q.links) {
      if (from != qid) continue;
      const auto a = entities.find(to);
      if (a == entities.end()) throw Error(ErrorCode::MissingField, "linked entity id " + std::to_string(to));
      if (a->second.label == "answer") answers.push_back(util::trim(a->second.text));
    }
    if (answers.empty()) continue;
    const std::string key = label_to_key(q.text);
    if (key.empty()) continue;
    const std::string value = kv::normalize_text(util::join(answers, " "));
    if (!gold.fields.emplace(key, value).second) spdlog::warn("funsd: duplicate question key '{}' ignored", key);
  }
  return gold;
}

GoldMap load_sroie_like(std::string_view json, kv::DateOrder order) {
  const nlohmann::json j = parse_json(json, "gold file");
  if (!j.is_object()) throw Error(ErrorCode::JsonMalformed, "gold file must be a JSON object");
  const kv::FieldSchema schema = kv::receipt_schema();
  GoldMap gold;
  for (const auto& [key, value] : j.items()) {
    const kv::FieldDef* def = schema.find(key);
    if (def == nullptr) {
      spdlog::warn("gold file: ignoring unknown key '{}'", key);
      continue;
    }
    if (value.is_null()) continue;
    if (!value.is_string()) throw Error(ErrorCode::JsonMalformed, "gold value for '" + key + "' is not a string");
    const std::string raw = value.get<std::string>();
    if (util::trim(raw).empty()) continue;
    gold.emplace(key, kv::normalize_field(raw, def->type, order));
  }
  return gold;
}

}  // namespace docex::eval
