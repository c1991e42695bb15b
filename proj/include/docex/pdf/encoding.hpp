#pragma once

#include <optional>

namespace docex::pdf {

enum class BaseEncoding { standard, win_ansi };

/// Unicode code point for a single-byte code, or nullopt when unmapped.
std::optional<char32_t> decode_code(BaseEncoding enc, unsigned char code) noexcept;

/// Inverse of decode_code; nullopt when the code point has no code.
std::optional<unsigned char> encode_code(BaseEncoding enc, char32_t cp) noexcept;

}  // namespace docex::pdf
