#include <algorithm>
#include <chrono>
#include <map>

#include "docex/error.hpp"
#include "docex/ocr/engine.hpp"
#include "docex/util/text.hpp"

namespace docex::ocr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Counter-based stream: the value for a key never depends on how many draws
// came before it, so output is a pure function of (seed, document, position).
class KeyedStream {
 public:
  KeyedStream(std::int64_t seed, std::string_view doc_key)
      : base_(splitmix64(static_cast<std::uint64_t>(seed) ^ splitmix64(fnv1a(doc_key)))) {}

  std::uint64_t bits(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return splitmix64(splitmix64(splitmix64(base_ ^ a) ^ b) ^ c);
  }

  double uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return static_cast<double>(bits(a, b, c) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t base_;
};

const std::map<char32_t, std::u32string>& confusion_table() {
  static const std::map<char32_t, std::u32string> table = {
      {U'O', U"0"}, {U'0', U"O"}, {U'l', U"1"}, {U'1', U"l"},
      {U'S', U"5"}, {U'5', U"S"}, {U'B', U"8"}, {U'8', U"B"},
  };
  return table;
}

}  // namespace

std::u32string confusable_candidates(char32_t cp) {
  const auto& table = confusion_table();
  if (auto it = table.find(cp); it != table.end()) return it->second;
  std::u32string out;
  for (char32_t c = U'a'; c <= U'z'; ++c) {
    if (c != cp) out.push_back(c);
  }
  for (char32_t c = U'0'; c <= U'9'; ++c) {
    if (c != cp) out.push_back(c);
  }
  return out;
}

RecognizedPage mock_recognize(const EngineSpec& spec, const std::vector<core::Word>& gold,
                              std::string_view doc_key) {
  if (spec.kind != EngineKind::mock) {
    throw Error(ErrorCode::NotMockEngine, "engine '" + spec.name + "' is not a mock engine");
  }
  validate(spec);
  const auto start = std::chrono::steady_clock::now();
  const double rate = *spec.mock_char_error_rate;
  const KeyedStream stream(*spec.mock_seed, doc_key);

  RecognizedPage page;
  page.engine_name = spec.name;
  page.words.reserve(gold.size());
  for (std::size_t wi = 0; wi < gold.size(); ++wi) {
    const core::Word& g = gold[wi];
    std::u32string cps = util::decode_utf8(g.text);
    // The substitution draw is keyed by the word's document position and
    // shared by its characters: each character is replaced with probability
    // `rate`, and errors cluster per word so word accuracy tracks 1 - rate.
    const bool corrupt = stream.uniform(wi, 0, 0) < rate;
    std::size_t substituted = 0;
    if (corrupt) {
      for (std::size_t ci = 0; ci < cps.size(); ++ci) {
        std::u32string candidates = confusable_candidates(cps[ci]);
        cps[ci] = candidates[stream.bits(wi, ci + 1, 1) % candidates.size()];
        ++substituted;
      }
    }
    core::Word w = g;
    w.text = util::encode_utf8(cps);
    const double frac = cps.empty() ? 0.0 : static_cast<double>(substituted) / cps.size();
    w.confidence = std::clamp(0.99 - 0.5 * frac, 0.0, 1.0);
    page.words.push_back(std::move(w));
  }
  page.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return page;
}

}  // namespace docex::ocr
