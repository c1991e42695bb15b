#include "docex/preprocess/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <vector>

#include "docex/error.hpp"
#include "docex/preprocess/ops.hpp"
#include "docex/util/files.hpp"

namespace docex::preprocess {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ImageFormat, what); }

bool is_png(std::string_view bytes) {
  static constexpr unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

RasterImage decode_png(std::string_view bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    bad(std::string("PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&image, &white, rgb.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    bad("PNG: " + msg);
  }
  return to_grayscale(static_cast<int>(image.width), static_cast<int>(image.height), rgb);
}

// Netpbm header: magic, then whitespace-separated integers with '#' comments,
// then exactly one whitespace byte before the raster.
struct PnmHeader {
  char kind = 0;
  int width = 0;
  int height = 0;
  int maxval = 1;
  std::size_t data_offset = 0;
};

PnmHeader parse_pnm_header(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') bad("not a Netpbm file");
  PnmHeader h;
  h.kind = bytes[1];
  if (h.kind != '4' && h.kind != '5' && h.kind != '6') {
    bad(std::string("unsupported Netpbm variant P") + h.kind);
  }
  std::size_t pos = 2;
  auto next_int = [&]() -> int {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n' && bytes[pos] != '\r') ++pos;
        continue;
      }
      break;
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      bad("truncated Netpbm header");
    }
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000) bad("Netpbm dimension too large");
      ++pos;
    }
    return static_cast<int>(v);
  };
  h.width = next_int();
  h.height = next_int();
  if (h.kind != '4') h.maxval = next_int();
  if (h.width <= 0 || h.height <= 0) bad("Netpbm dimensions must be positive");
  if (h.maxval <= 0 || h.maxval > 255) bad("only 8-bit Netpbm maxval is supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    bad("missing whitespace after Netpbm header");
  }
  h.data_offset = pos + 1;
  return h;
}

std::uint8_t scale_to_8bit(unsigned v, int maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>((std::min<unsigned>(v, maxval) * 255u + maxval / 2) / maxval);
}

}  // namespace

BinaryImage decode_pbm(std::string_view bytes) {
  PnmHeader h = parse_pnm_header(bytes);
  if (h.kind != '4') bad("expected P4 bitmap");
  const std::size_t row_bytes = (static_cast<std::size_t>(h.width) + 7) / 8;
  if (bytes.size() - h.data_offset < row_bytes * h.height) bad("truncated P4 raster");
  BinaryImage img(h.width, h.height);
  for (int y = 0; y < h.height; ++y) {
    const auto* row = reinterpret_cast<const unsigned char*>(bytes.data() + h.data_offset + y * row_bytes);
    for (int x = 0; x < h.width; ++x) {
      bool ink = (row[x / 8] >> (7 - x % 8)) & 1;
      if (ink) img.set(x, y, true);
    }
  }
  return img;
}

RasterImage decode_image(std::string_view bytes) {
  if (is_png(bytes)) return decode_png(bytes);
  PnmHeader h = parse_pnm_header(bytes);
  if (h.kind == '4') return to_raster(decode_pbm(bytes));
  const std::size_t channels = h.kind == '6' ? 3 : 1;
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height * channels;
  if (bytes.size() - h.data_offset < n) bad("truncated Netpbm raster");
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + h.data_offset);
  std::vector<std::uint8_t> px(n);
  for (std::size_t i = 0; i < n; ++i) px[i] = scale_to_8bit(data[i], h.maxval);
  if (channels == 3) return to_grayscale(h.width, h.height, px);
  return RasterImage(h.width, h.height, std::move(px));
}

RasterImage load_image(const std::filesystem::path& path) { return decode_image(util::read_file(path)); }

std::string encode_png(const RasterImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, img.pixels().data(), 0, nullptr)) {
    bad(std::string("PNG encode: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels().data(), 0, nullptr)) {
    bad(std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::string encode_pgm(const RasterImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels().data()), img.pixels().size());
  return out;
}

std::string encode_pbm(const BinaryImage& img) {
  std::string out = "P4\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n";
  const std::size_t row_bytes = (static_cast<std::size_t>(img.width()) + 7) / 8;
  for (int y = 0; y < img.height(); ++y) {
    std::string row(row_bytes, '\0');
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) row[x / 8] = static_cast<char>(row[x / 8] | (0x80 >> (x % 8)));
    }
    out += row;
  }
  return out;
}

bool is_supported_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm" || ext == ".pbm" || ext == ".ppm";
}

}  // namespace docex::preprocess
