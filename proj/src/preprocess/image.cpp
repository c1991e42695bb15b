#include "docex/preprocess/image.hpp"

#include <algorithm>
#include <string>

#include "docex/error.hpp"

namespace docex::preprocess {

namespace {

void check_dims(int width, int height, std::size_t size) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "image dimensions must be positive");
  }
  if (size != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "pixel buffer holds " + std::to_string(size) +
                                                  " values, expected " + std::to_string(width) +
                                                  "x" + std::to_string(height));
  }
}

}  // namespace

RasterImage::RasterImage(int width, int height, std::uint8_t fill)
    : RasterImage(width, height,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                                static_cast<std::size_t>(std::max(height, 0)),
                                            fill)) {}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size());
}

BinaryImage::BinaryImage(int width, int height)
    : BinaryImage(width, height,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                                static_cast<std::size_t>(std::max(height, 0)),
                                            0)) {}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width_, height_, pixels_.size());
  for (std::uint8_t p : pixels_) {
    if (p > 1) throw Error(ErrorCode::DimensionMismatch, "binary pixels must be 0 or 1");
  }
}

std::size_t BinaryImage::foreground_count() const noexcept {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), std::uint8_t{1}));
}

}  // namespace docex::preprocess
