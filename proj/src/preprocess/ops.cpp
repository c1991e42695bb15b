#include "docex/preprocess/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "docex/error.hpp"

namespace docex::preprocess {

RasterImage to_grayscale(int width, int height, std::span<const std::uint8_t> rgb) {
  if (width <= 0 || height <= 0 ||
      rgb.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch,
                "RGB buffer of " + std::to_string(rgb.size()) + " bytes does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    // Integer form of round(0.299 R + 0.587 G + 0.114 B), half rounding up.
    unsigned r = rgb[3 * i];
    unsigned g = rgb[3 * i + 1];
    unsigned b = rgb[3 * i + 2];
    unsigned luma = (299 * r + 587 * g + 114 * b + 500) / 1000;
    out[i] = static_cast<std::uint8_t>(std::min(luma, 255u));
  }
  return RasterImage(width, height, std::move(out));
}

Histogram histogram(const RasterImage& img) {
  Histogram h{};
  for (std::uint8_t p : img.pixels()) ++h[p];
  return h;
}

int otsu_threshold(const Histogram& hist) {
  using Big = boost::multiprecision::int512_t;
  std::uint64_t total = 0;
  Big weighted = 0;
  int occupied = 0;
  int last_occupied = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    weighted += Big(hist[v]) * v;
    if (hist[v] > 0) {
      ++occupied;
      last_occupied = v;
    }
  }
  if (total == 0) throw Error(ErrorCode::EmptyHistogram, "histogram has no mass");
  if (occupied == 1) return last_occupied;

  // w0 w1 (mu0 - mu1)^2 / W^2 == (S0 W - w0 S)^2 / (w0 w1 W^2); the common W^2
  // is dropped and scores are compared as exact fractions, so ties resolve
  // to the smallest t regardless of rounding.
  std::uint64_t w0 = 0;
  Big s0 = 0;
  Big best_num = -1;
  Big best_den = 1;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    w0 += hist[t];
    s0 += Big(hist[t]) * t;
    const std::uint64_t w1 = total - w0;
    Big num = 0;
    Big den = 1;
    if (w0 > 0 && w1 > 0) {
      const Big diff = s0 * total - weighted * w0;
      num = diff * diff;
      den = Big(w0) * w1;
    }
    if (num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize(const RasterImage& img, int threshold) {
  std::vector<std::uint8_t> out(img.pixels().size());
  auto src = img.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = src[i] <= threshold ? 1 : 0;
  return BinaryImage(img.width(), img.height(), std::move(out));
}

namespace {

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

void check_angle(double angle_deg) {
  if (!(std::abs(angle_deg) <= 45.0)) {
    throw Error(ErrorCode::AngleOutOfRange, "rotation angle " + std::to_string(angle_deg) +
                                                " outside [-45, 45]");
  }
}

}  // namespace

double projection_variance(const BinaryImage& img, double angle_deg) {
  const double cx = (img.width() - 1) / 2.0;
  const double cy = (img.height() - 1) / 2.0;
  const double s = std::sin(deg2rad(angle_deg));
  const double c = std::cos(deg2rad(angle_deg));
  // Fixed bin range independent of the angle so variances are comparable.
  const double half_diag = 0.5 * std::hypot(img.width(), img.height()) + 2.0;
  const int offset = static_cast<int>(std::ceil(half_diag - cy));
  const int bins = static_cast<int>(std::ceil(2 * half_diag)) + 1;
  std::vector<double> profile(static_cast<std::size_t>(bins), 0.0);
  double n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      double ry = cy + s * (x - cx) + c * (y - cy);
      int row = static_cast<int>(std::floor(ry + 0.5)) + offset;
      row = std::clamp(row, 0, bins - 1);
      profile[static_cast<std::size_t>(row)] += 1.0;
      n += 1.0;
    }
  }
  double sumsq = 0;
  for (double v : profile) sumsq += v * v;
  double mean = n / bins;
  return sumsq / bins - mean * mean;
}

double estimate_skew(const BinaryImage& img) {
  if (img.empty() || img.foreground_count() == 0) {
    throw Error(ErrorCode::NoContent, "image has no foreground pixels");
  }
  // Angles are kept as integer multiples of the fine step to avoid drift.
  const int per_degree = static_cast<int>(1.0 / kSkewFineStep);
  const int range = static_cast<int>(kSkewRange) * per_degree;
  const int coarse = static_cast<int>(kSkewCoarseStep) * per_degree;

  auto better = [](double score, int q, double best, int best_q) {
    if (score > best) return true;
    return score == best && std::abs(q) < std::abs(best_q);
  };

  double best = -1;
  int best_q = 0;
  for (int q = -range; q <= range; q += coarse) {
    double score = projection_variance(img, -q * kSkewFineStep);
    if (better(score, q, best, best_q)) {
      best = score;
      best_q = q;
    }
  }
  const int centre = best_q;
  for (int q = std::max(-range, centre - coarse); q <= std::min(range, centre + coarse); ++q) {
    if (q == centre) continue;
    double score = projection_variance(img, -q * kSkewFineStep);
    if (better(score, q, best, best_q)) {
      best = score;
      best_q = q;
    }
  }
  return best_q * kSkewFineStep;
}

RasterImage rotate_image(const RasterImage& img, double angle_deg) {
  check_angle(angle_deg);
  if (angle_deg == 0.0 || img.empty()) return img;
  const double cx = (img.width() - 1) / 2.0;
  const double cy = (img.height() - 1) / 2.0;
  const double s = std::sin(deg2rad(angle_deg));
  const double c = std::cos(deg2rad(angle_deg));
  RasterImage out(img.width(), img.height(), 255);
  auto sample = [&](int x, int y) -> double {
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return 255.0;
    return img.at(x, y);
  };
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      // Inverse map: source = c + R(-angle) (dest - c).
      double dx = x - cx;
      double dy = y - cy;
      double sx = cx + c * dx + s * dy;
      double sy = cy - s * dx + c * dy;
      double fx0 = std::floor(sx);
      double fy0 = std::floor(sy);
      int x0 = static_cast<int>(fx0);
      int y0 = static_cast<int>(fy0);
      double fx = sx - fx0;
      double fy = sy - fy0;
      double v = (1 - fx) * (1 - fy) * sample(x0, y0) + fx * (1 - fy) * sample(x0 + 1, y0) +
                 (1 - fx) * fy * sample(x0, y0 + 1) + fx * fy * sample(x0 + 1, y0 + 1);
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

BinaryImage rotate_image(const BinaryImage& img, double angle_deg) {
  check_angle(angle_deg);
  if (angle_deg == 0.0 || img.empty()) return img;
  const double cx = (img.width() - 1) / 2.0;
  const double cy = (img.height() - 1) / 2.0;
  const double s = std::sin(deg2rad(angle_deg));
  const double c = std::cos(deg2rad(angle_deg));
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double dx = x - cx;
      double dy = y - cy;
      long sx = std::lround(cx + c * dx + s * dy);
      long sy = std::lround(cy - s * dx + c * dy);
      if (sx < 0 || sy < 0 || sx >= img.width() || sy >= img.height()) continue;
      if (img.at(static_cast<int>(sx), static_cast<int>(sy))) out.set(x, y, true);
    }
  }
  return out;
}

BinaryImage median_denoise(const BinaryImage& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "majority filter needs at least 3x3 pixels");
  }
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int votes = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = x + dx;
          int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= img.width() || ny >= img.height()) continue;
          votes += img.at(nx, ny);
        }
      }
      if (votes >= 5) out.set(x, y, true);
    }
  }
  return out;
}

std::vector<LineBand> segment_lines(const BinaryImage& img) {
  std::vector<LineBand> bands;
  const double threshold = std::max(1.0, 0.005 * img.width());
  int start = -1;
  for (int y = 0; y < img.height(); ++y) {
    int count = 0;
    for (int x = 0; x < img.width(); ++x) count += img.at(x, y);
    bool ink = count > threshold;
    if (ink && start < 0) start = y;
    if (!ink && start >= 0) {
      bands.push_back({start, y});
      start = -1;
    }
  }
  if (start >= 0) bands.push_back({start, img.height()});
  return bands;
}

RasterImage to_raster(const BinaryImage& img) {
  if (img.empty()) return {};
  std::vector<std::uint8_t> out(img.pixels().size());
  auto src = img.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = src[i] ? 0 : 255;
  return RasterImage(img.width(), img.height(), std::move(out));
}

}  // namespace docex::preprocess
