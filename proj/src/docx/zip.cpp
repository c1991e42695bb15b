#include "docex/docx/zip.hpp"

#include <zlib.h>

#include "docex/error.hpp"

namespace docex::docx {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::size_t kMaxEntrySize = std::size_t{512} << 20;

[[noreturn]] void not_zip(const std::string& why) { throw Error(ErrorCode::NotAZip, why); }

std::uint16_t u16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) not_zip("truncated archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) | static_cast<unsigned char>(b[at + 1]) << 8);
}

std::uint32_t u32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(u16(b, at)) | static_cast<std::uint32_t>(u16(b, at + 2)) << 16;
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xFFFF));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::string inflate_raw(std::string_view in, std::size_t expected) {
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) not_zip("zlib init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::string out(expected + 1, '\0');  // spare byte detects overlong data
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int ret = inflate(&zs, Z_FINISH);
  const std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (ret != Z_STREAM_END || produced != expected) not_zip("corrupt deflate data");
  out.resize(expected);
  return out;
}

std::string deflate_raw(std::string_view in) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorCode::Io, "zlib init failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int ret = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (ret != Z_STREAM_END) throw Error(ErrorCode::Io, "zlib deflate failed");
  return out;
}

std::uint32_t crc_of(std::string_view data) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

}  // namespace

ZipArchive ZipArchive::open(std::string_view bytes) {
  if (bytes.size() < 22) not_zip("too short for a ZIP archive");
  std::size_t eocd = std::string_view::npos;
  const std::size_t lowest = bytes.size() > 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
  for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
    if (u32(bytes, i) == kEndSig) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos) not_zip("end of central directory not found");
  const std::uint16_t count = u16(bytes, eocd + 10);
  const std::uint32_t cd_offset = u32(bytes, eocd + 16);
  if (cd_offset == 0xFFFFFFFF || count == 0xFFFF) not_zip("zip64 archives are not supported");

  ZipArchive zip;
  zip.bytes_ = bytes;
  std::size_t at = cd_offset;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(bytes, at) != kCentralSig) not_zip("bad central directory entry");
    ZipEntry e;
    const std::uint16_t flags = u16(bytes, at + 8);
    e.method = u16(bytes, at + 10);
    e.crc = u32(bytes, at + 16);
    e.compressed_size = u32(bytes, at + 20);
    e.size = u32(bytes, at + 24);
    const std::uint16_t name_len = u16(bytes, at + 28);
    const std::uint16_t extra_len = u16(bytes, at + 30);
    const std::uint16_t comment_len = u16(bytes, at + 32);
    e.local_offset = u32(bytes, at + 42);
    if (at + 46 + name_len > bytes.size()) not_zip("truncated central directory");
    e.name = std::string(bytes.substr(at + 46, name_len));
    if (flags & 1) throw Error(ErrorCode::UnsupportedFeature, "encrypted ZIP entry " + e.name);
    zip.entries_.push_back(std::move(e));
    at += 46 + name_len + extra_len + comment_len;
  }
  return zip;
}

const ZipEntry* ZipArchive::find(std::string_view name) const noexcept {
  for (const ZipEntry& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string ZipArchive::read(const ZipEntry& e) const {
  if (u32(bytes_, e.local_offset) != kLocalSig) not_zip("bad local header for " + e.name);
  const std::size_t start = e.local_offset + 30 + u16(bytes_, e.local_offset + 26) + u16(bytes_, e.local_offset + 28);
  if (start > bytes_.size() || e.compressed_size > bytes_.size() - start) not_zip("truncated entry " + e.name);
  if (e.size > kMaxEntrySize) not_zip("entry too large: " + e.name);
  const std::string_view raw = bytes_.substr(start, e.compressed_size);
  std::string data;
  if (e.method == 0) {
    data = std::string(raw);
  } else if (e.method == 8) {
    data = inflate_raw(raw, e.size);
  } else {
    throw Error(ErrorCode::UnsupportedFeature, "ZIP compression method " + std::to_string(e.method));
  }
  if (crc_of(data) != e.crc) not_zip("CRC mismatch in " + e.name);
  return data;
}

std::string write_zip(const std::vector<std::pair<std::string, std::string>>& files) {
  std::string out;
  std::string central;
  for (const auto& [name, data] : files) {
    const std::string packed = deflate_raw(data);
    const std::uint32_t crc = crc_of(data);
    const auto offset = static_cast<std::uint32_t>(out.size());
    auto header = [&](std::string& dst, bool is_central) {
      put32(dst, is_central ? kCentralSig : kLocalSig);
      if (is_central) put16(dst, 20);  // version made by
      put16(dst, 20);  // version needed
      put16(dst, 0);  // flags
      put16(dst, 8);  // deflate
      put16(dst, 0);  // time
      put16(dst, 0x21);  // date: 1980-01-01
      put32(dst, crc);
      put32(dst, static_cast<std::uint32_t>(packed.size()));
      put32(dst, static_cast<std::uint32_t>(data.size()));
      put16(dst, static_cast<std::uint16_t>(name.size()));
      put16(dst, 0);  // extra
      if (is_central) {
        put16(dst, 0);  // comment
        put16(dst, 0);  // disk
        put16(dst, 0);  // internal attrs
        put32(dst, 0);  // external attrs
        put32(dst, offset);
      }
      dst += name;
    };
    header(out, false);
    out += packed;
    header(central, true);
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(files.size()));
  put16(out, static_cast<std::uint16_t>(files.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

}  // namespace docex::docx
