#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace docex::docx {

struct ZipEntry {
  std::string name;
  std::uint16_t method = 0;  // 0 stored, 8 deflate
  std::uint32_t crc = 0;
  std::uint32_t compressed_size = 0;
  std::uint32_t size = 0;
  std::uint32_t local_offset = 0;
};

// Read-only view over an in-memory archive (no zip64, no encryption).
class ZipArchive {
 public:
  static ZipArchive open(std::string_view bytes);  // NotAZip

  const std::vector<ZipEntry>& entries() const noexcept { return entries_; }
  const ZipEntry* find(std::string_view name) const noexcept;
  std::string read(const ZipEntry& entry) const;

 private:
  std::string_view bytes_;
  std::vector<ZipEntry> entries_;
};

/// Deterministic archive writer (fixed timestamps), deflating each entry.
std::string write_zip(const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace docex::docx
