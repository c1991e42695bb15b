#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "docex/preprocess/image.hpp"

namespace docex::preprocess {

using Histogram = std::array<std::uint64_t, 256>;

/// luma = round(0.299 R + 0.587 G + 0.114 B). Throws DimensionMismatch.
RasterImage to_grayscale(int width, int height, std::span<const std::uint8_t> rgb);
inline RasterImage to_grayscale(const RgbImage& rgb) {
  return to_grayscale(rgb.width, rgb.height, rgb.pixels);
}

Histogram histogram(const RasterImage& img);

/// Smallest t maximizing the between-class variance of [0..t] vs [t+1..255].
/// A histogram with a single occupied bin returns that bin.
int otsu_threshold(const Histogram& hist);

/// Pixel becomes foreground iff luminance <= t.
BinaryImage binarize(const RasterImage& img, int threshold);

inline constexpr double kSkewRange = 15.0;
inline constexpr double kSkewCoarseStep = 1.0;
inline constexpr double kSkewFineStep = 0.25;

/// Angle in degrees in [-15, 15] whose counter-rotation maximizes the
/// variance of the horizontal projection profile. Throws NoContent.
double estimate_skew(const BinaryImage& img);

/// Variance of the row profile of the foreground after rotating by `angle_deg`.
double projection_variance(const BinaryImage& img, double angle_deg);

// Rotation about the image center, dimensions unchanged. Positive angles
// follow the same convention as estimate_skew, so rotate_image(img, -estimate)
// undoes a detected skew. Throws AngleOutOfRange for |angle| > 45.
RasterImage rotate_image(const RasterImage& img, double angle_deg);  // bilinear, fill 255
BinaryImage rotate_image(const BinaryImage& img, double angle_deg);  // nearest, fill 0

/// 3x3 majority filter with background padding. Throws ImageTooSmall.
BinaryImage median_denoise(const BinaryImage& img);

/// Maximal runs of rows whose ink count exceeds max(1, 0.005 * width).
std::vector<LineBand> segment_lines(const BinaryImage& img);

/// Raster view of a binary image (ink 0, background 255).
RasterImage to_raster(const BinaryImage& img);

}  // namespace docex::preprocess
