#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pirogue/errors.hpp"

namespace pirogue::csv {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  Table t;
  t.path = path;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split(body);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw ValidationError(path.string() + ": empty file");
  return t;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ValidationError(path.string() + ": missing column '" + std::string(name) + "'");
}

void Table::fail(std::size_t row, std::string_view what) const {
  throw ValidationError(path.string() + ":" + std::to_string(line_numbers.at(row)) + ": " + std::string(what));
}

double Table::number(std::size_t row, std::size_t col) const {
  const std::string& s = rows.at(row).at(col);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    fail(row, "column '" + header[col] + "': not a finite number: '" + s + "'");
  return v;
}

int Table::integer(std::size_t row, std::size_t col) const {
  const std::string& s = rows.at(row).at(col);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(row, "column '" + header[col] + "': not an integer: '" + s + "'");
  return v;
}

void expect_header(const Table& t, const std::vector<std::string>& expected) {
  if (t.header == expected) return;
  std::ostringstream msg;
  msg << t.path.string() << ": header must be '";
  for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? "," : "") << expected[i];
  msg << "'";
  throw ValidationError(msg.str());
}

}  // namespace pirogue::csv
