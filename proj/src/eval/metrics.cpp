#include "docex/eval/metrics.hpp"

#include "docex/error.hpp"
#include "docex/util/text.hpp"

namespace docex::eval {

EditDistanceResult char_distance(std::string_view ref, std::string_view hyp) {
  const std::u32string r = util::decode_utf8(ref);
  if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference text is empty");
  return levenshtein(r, util::decode_utf8(hyp));
}

EditDistanceResult word_distance(std::string_view ref, std::string_view hyp) {
  const std::vector<std::string> r = util::split_whitespace(ref);
  if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference has no words");
  return levenshtein(r, util::split_whitespace(hyp));
}

double cer(std::string_view ref, std::string_view hyp) {
  const EditDistanceResult d = char_distance(ref, hyp);
  return static_cast<double>(d.distance) / static_cast<double>(d.ref_len);
}

double wer(std::string_view ref, std::string_view hyp) {
  const EditDistanceResult d = word_distance(ref, hyp);
  return static_cast<double>(d.distance) / static_cast<double>(d.ref_len);
}

}  // namespace docex::eval
