#pragma once

// Reference implementations used as test oracles. Deliberately naive: they
// recompute everything from first principles instead of sharing code or
// recurrences with the library.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "docex/preprocess/bitmap_font.hpp"

namespace docex::oracle {

// Exhaustive Otsu: every t, class statistics summed from scratch, scores
// compared exactly as rationals. Smallest t wins ties.
inline int otsu(const std::array<std::uint64_t, 256>& hist) {
  using boost::multiprecision::cpp_int;
  int occupied = 0;
  int only = 0;
  for (int i = 0; i < 256; ++i) {
    if (hist[i] > 0) {
      ++occupied;
      only = i;
    }
  }
  if (occupied == 1) return only;

  cpp_int best_num = -1;
  cpp_int best_den = 1;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    cpp_int w0 = 0, w1 = 0, s0 = 0, s1 = 0;
    for (int i = 0; i < 256; ++i) {
      if (i <= t) {
        w0 += hist[i];
        s0 += cpp_int(hist[i]) * i;
      } else {
        w1 += hist[i];
        s1 += cpp_int(hist[i]) * i;
      }
    }
    // between-class variance is proportional to w0*w1*(mu0-mu1)^2
    //   = (w1*s0 - w0*s1)^2 / (w0*w1)
    cpp_int num = 0;
    cpp_int den = 1;
    if (w0 > 0 && w1 > 0) {
      const cpp_int diff = w1 * s0 - w0 * s1;
      num = diff * diff;
      den = w0 * w1;
    }
    if (num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  return best_t;
}

// Edit distance straight from the recursive definition, memoized on suffixes.
inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    int& m = memo[i][j];
    if (m >= 0) return m;
    if (a[i] == b[j]) return m = self(self, i + 1, j + 1);
    const int del = self(self, i + 1, j);
    const int ins = self(self, i, j + 1);
    const int sub = self(self, i + 1, j + 1);
    return m = 1 + std::min(del, std::min(ins, sub));
  };
  return static_cast<std::size_t>(rec(rec, 0, 0));
}

// All strings over `alphabet` with length <= max_len.
inline std::vector<std::string> all_strings(const std::string& alphabet, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

// Clean text page for the deskew loop: horizontal lines of dot-matrix text
// with generous margins so rotation never clips ink.
inline preprocess::RasterImage skew_fixture() {
  std::vector<std::string> lines;
  const char* words[] = {"invoice", "total", "amount", "date", "paid", "balance", "item", "qty"};
  for (int l = 0; l < 14; ++l) {
    std::string line;
    for (int w = 0; w < 7; ++w) {
      if (w) line += ' ';
      line += words[(l * 7 + w * 3) % 8];
    }
    lines.push_back(line);
  }
  preprocess::TextLayout layout;
  layout.margin = 120;
  return preprocess::render_text(lines, layout).image;
}

}  // namespace docex::oracle
