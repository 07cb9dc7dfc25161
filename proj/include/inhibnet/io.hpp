#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace inhibnet {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Comma-joined shortest round-trip values.
std::string join_doubles(std::span<const double> xs, std::string_view sep = ",");

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

} // namespace inhibnet
