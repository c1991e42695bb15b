#pragma once

#include <string>
#include <vector>

namespace docex::pdf {

enum class StreamVariant { uncompressed, flate };

/// One vector of lines per page. Empty lines become paragraph breaks.
/// Output is byte-for-byte deterministic for the same input.
std::string generate_pdf(const std::vector<std::vector<std::string>>& pages, double font_size = 12.0,
                         StreamVariant variant = StreamVariant::uncompressed);

/// Code points the generator accepts: printable WinAnsi, excluding no-break
/// and soft hyphen.
bool generator_supports(char32_t cp) noexcept;

}  // namespace docex::pdf
