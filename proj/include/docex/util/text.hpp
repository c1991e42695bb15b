#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace docex::util {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD one
// byte at a time, so decoding is total.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

// Longest prefix holding at most `max_code_points` code points.
std::string_view utf8_prefix(std::string_view text, std::size_t max_code_points);

// Lowercases ASCII and the Latin-1 supplement letters; other code points pass through.
std::string casefold(std::string_view text);

std::vector<std::string> split_whitespace(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);
std::string trim(std::string_view text);
std::string collapse_whitespace(std::string_view text);

// Removes leading/trailing whitespace and ASCII punctuation.
std::string strip_edge_punctuation(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_space(char c) noexcept;
bool has_line_break(std::string_view text) noexcept;

}  // namespace docex::util
