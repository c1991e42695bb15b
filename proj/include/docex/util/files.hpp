#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace docex::util {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace docex::util
