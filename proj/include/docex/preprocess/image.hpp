#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace docex::preprocess {

// 8-bit luminance, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, std::uint8_t fill = 255);
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  bool operator==(const RasterImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// 1 = foreground (ink), 0 = background.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height);
  BinaryImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, bool ink) { pixels_[static_cast<std::size_t>(y) * width_ + x] = ink ? 1 : 0; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::size_t foreground_count() const noexcept;

  bool operator==(const BinaryImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Interleaved 8-bit RGB.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Rows [row_start, row_end).
struct LineBand {
  int row_start = 0;
  int row_end = 0;

  bool operator==(const LineBand&) const = default;
};

}  // namespace docex::preprocess
