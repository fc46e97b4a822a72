#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ugk/common.hpp"

namespace ugk {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Strict parse of a full field; throws Error(Format) on trailing garbage.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

/// Reads a comma-separated numeric grid. Blank lines and lines starting with
/// '#' are skipped, so files may carry a provenance comment header.
Matrix read_grid_csv(const std::filesystem::path& path);

/// Writes a numeric grid; `comment`, if non-empty, becomes a leading "# ..."
/// line.
void write_grid_csv(const std::filesystem::path& path, const Matrix& grid,
                    std::string_view comment = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ugk
