#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cogload::csv {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

struct Row {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

// A parsed CSV file. Lines starting with '#' and blank lines are skipped; the
// first remaining line is the header.
struct Table {
  std::filesystem::path path;
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

// Throws Error(MissingFile) when the file cannot be opened. A file with no
// header yields an empty Table.
Table read(const std::filesystem::path& path);

std::string join(const std::vector<std::string>& fields, char sep = ',');

}  // namespace cogload::csv
