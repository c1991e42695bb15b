#include "docex/kv/prompt.hpp"

#include "docex/error.hpp"
#include "docex/util/text.hpp"

namespace docex::kv {

std::string build_prompt(const FieldSchema& schema, std::string_view raw_text, std::size_t budget) {
  if (util::trim(raw_text).empty()) throw Error(ErrorCode::EmptyDocument, "document has no text");
  const std::size_t length = util::utf8_length(raw_text);
  const bool truncated = length > budget;
  const std::string_view text = truncated ? util::utf8_prefix(raw_text, budget) : raw_text;

  std::string p;
  p += "You are an information extraction system. Read the document below and extract the requested fields.\n\n";
  p += "Fields:\n";
  for (const FieldDef& f : schema.fields) {
    p += "- " + f.name + " (" + std::string(to_string(f.type)) + (f.required ? ", required" : ", optional") + ")";
    if (!f.description.empty()) p += ": " + f.description;
    p += "\n";
  }
  p += "\nAnswer with a single JSON object whose keys are exactly the field names listed above";
  p += " and nothing else. Copy each value as it appears in the document. Use null for any field that"
       " does not appear in the document.\n\n";
  p += kDocumentBegin;
  p += "\n";
  p += text;
  if (!text.empty() && text.back() != '\n') p += "\n";
  p += kDocumentEnd;
  p += "\n";
  if (truncated) {
    p += "[Note: the document was truncated to its first " + std::to_string(budget) + " of " +
         std::to_string(length) + " characters.]\n";
  }
  return p;
}

std::string build_repair_prompt(std::string_view prompt, std::string_view error) {
  std::string p(prompt);
  p += "\nYour previous answer could not be used: ";
  p += error;
  p += "\nReply again with only the JSON object described above.\n";
  return p;
}

}  // namespace docex::kv
