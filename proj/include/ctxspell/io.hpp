#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ctxspell::io {

std::vector<std::string_view> split(std::string_view text, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Reads a whole file; strips a trailing '\r' from each line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes to `<path>.tmp` and renames over `path`, so readers never observe a
/// truncated file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
/// Fixed-point with `digits` decimals.
std::string format_fixed(double value, int digits);

// Strict parsers: the whole field must be consumed. Throw ParseError(line).
long long parse_int(std::string_view field, std::size_t line);
double parse_double(std::string_view field, std::size_t line);

}  // namespace ctxspell::io
