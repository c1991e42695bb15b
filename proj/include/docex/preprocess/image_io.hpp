#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "docex/preprocess/image.hpp"

namespace docex::preprocess {

// Decodes PNG (gray, gray+alpha, RGB, RGBA, palette; alpha composited on
// white) or binary Netpbm (P4, P5, P6) into 8-bit luminance. Color input
// goes through to_grayscale. Throws ImageFormat.
RasterImage decode_image(std::string_view bytes);
RasterImage load_image(const std::filesystem::path& path);

std::string encode_png(const RasterImage& img);
std::string encode_pgm(const RasterImage& img);  // P5
std::string encode_pbm(const BinaryImage& img);  // P4

// Netpbm P4 decodes to a BinaryImage directly (1 = black = ink).
BinaryImage decode_pbm(std::string_view bytes);

bool is_supported_image(const std::filesystem::path& path);

}  // namespace docex::preprocess
