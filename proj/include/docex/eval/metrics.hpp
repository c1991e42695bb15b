#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace docex::eval {

struct EditDistanceResult {
  std::size_t distance = 0;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;

  bool operator==(const EditDistanceResult&) const = default;
};

/// Unit-cost insert/delete/substitute distance, two-row DP.
template <typename Seq>
EditDistanceResult levenshtein(const Seq& ref, const Seq& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  auto ri = ref.begin();
  for (std::size_t i = 1; i <= n; ++i, ++ri) {
    cur[0] = i;
    auto hj = hyp.begin();
    for (std::size_t j = 1; j <= m; ++j, ++hj) {
      const std::size_t sub = prev[j - 1] + (*ri == *hj ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return {prev[m], n, m};
}

/// Character distance over code points. Throws EmptyReference.
EditDistanceResult char_distance(std::string_view ref, std::string_view hyp);
/// Word distance over whitespace tokens. Throws EmptyReference.
EditDistanceResult word_distance(std::string_view ref, std::string_view hyp);

double cer(std::string_view ref, std::string_view hyp);
double wer(std::string_view ref, std::string_view hyp);

inline double word_accuracy(double wer_value) { return std::max(0.0, 1.0 - wer_value); }

}  // namespace docex::eval
