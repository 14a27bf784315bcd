#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace medal {

/// Writes `content` to `path` atomically (temp file in the same directory,
/// then rename). Creates parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Reads a file line by line (newline-stripped), invoking fn(line_number, line)
/// for every non-empty line. Line numbers are 1-based.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::size_t, const std::string&)>& fn);

std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace medal
