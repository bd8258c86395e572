#pragma once

// Small text helpers shared by the file readers and writers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snowball::text {

std::string_view trim(std::string_view s);

/// Splits on runs of spaces/tabs.
std::vector<std::string_view> split_ws(std::string_view line);

/// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest representation that round-trips, so written files are stable
/// across runs and exact when read back.
std::string format_double(double v);

/// Reads a whole file; throws InputError naming the path when it cannot be opened.
std::string read_file(const std::string& path);

/// Splits file contents into lines, stripping a trailing '\r'.
std::vector<std::string_view> lines(std::string_view contents);

} // namespace snowball::text
