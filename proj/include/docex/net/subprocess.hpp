#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace docex::net {

/// Unique directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

// Splits on whitespace outside single or double quotes. No other shell
// syntax is interpreted.
std::vector<std::string> split_command(std::string_view command);

struct ProcessResult {
  int exit_code = 0;
  std::string stdout_text;
  std::string stderr_text;
};

// Runs argv[0] (PATH lookup) without a shell. Throws EngineLaunchFailed when
// the program cannot start, Timeout when it outlives `timeout` (it is killed).
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout,
                          const std::filesystem::path& scratch_dir);

}  // namespace docex::net
