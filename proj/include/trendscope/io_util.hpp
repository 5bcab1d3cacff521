#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace trendscope::io {

// Throws IoError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);
// Splits on LF; a trailing CR on each line is dropped.
std::vector<std::string> read_lines(const std::filesystem::path& path);
std::vector<std::string> split(std::string_view s, char sep);

// Writes to "<path>.tmp" then renames over the final name, so readers never
// observe a partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace trendscope::io
