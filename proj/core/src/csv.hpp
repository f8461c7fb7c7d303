#pragma once

// Minimal comma-separated reader for the project's input tables. Fields are
// trimmed; no quoting (inputs never embed commas).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pirogue::csv {

struct Table {
  std::filesystem::path path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;

  /// Column index by header name; throws ValidationError if absent.
  std::size_t column(std::string_view name) const;
  [[noreturn]] void fail(std::size_t row, std::string_view what) const;
  double number(std::size_t row, std::size_t col) const;
  int integer(std::size_t row, std::size_t col) const;
};

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view line, char sep = ',');

/// Reads a CSV with a header line; blank lines and lines starting with '#' are skipped.
Table read(const std::filesystem::path& path);

/// Requires the header to equal `expected` exactly.
void expect_header(const Table& t, const std::vector<std::string>& expected);

}  // namespace pirogue::csv
