#include "pirogue/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "pirogue/errors.hpp"

namespace pirogue {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_double(const std::string& s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

bool AsciiGrid::is_nodata(double v) const { return nodata && (v == *nodata || std::fabs(v - *nodata) < 1e-9); }

bool AsciiGrid::same_shape(const AsciiGrid& o) const {
  return ncols == o.ncols && nrows == o.nrows && std::fabs(xllcorner - o.xllcorner) < 1e-9 &&
         std::fabs(yllcorner - o.yllcorner) < 1e-9 && std::fabs(cellsize - o.cellsize) < 1e-12;
}

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open raster " + path.string());
  const std::string name = path.string();

  AsciiGrid g;
  bool x_center = false, y_center = false;
  bool have_x = false, have_y = false, have_cs = false;
  std::string token;
  std::string pending;
  // Header: key/value pairs until the first numeric token.
  while (in >> token) {
    double value = 0.0;
    if (parse_double(token, value)) {
      pending = token;
      break;
    }
    std::string v;
    if (!(in >> v) || !parse_double(v, value)) throw ValidationError(name + ": bad header value for '" + token + "'");
    const std::string key = lower(token);
    if (key == "ncols") g.ncols = static_cast<int>(value);
    else if (key == "nrows") g.nrows = static_cast<int>(value);
    else if (key == "xllcorner" || key == "xllcenter") { g.xllcorner = value; x_center = key == "xllcenter"; have_x = true; }
    else if (key == "yllcorner" || key == "yllcenter") { g.yllcorner = value; y_center = key == "yllcenter"; have_y = true; }
    else if (key == "cellsize") { g.cellsize = value; have_cs = true; }
    else if (key == "nodata_value") g.nodata = value;
    else throw ValidationError(name + ": unknown header key '" + token + "'");
  }
  if (g.ncols <= 0 || g.nrows <= 0 || !have_x || !have_y || !have_cs || g.cellsize <= 0.0)
    throw ValidationError(name + ": incomplete header (need ncols, nrows, xll*, yll*, cellsize)");
  if (x_center) g.xllcorner -= g.cellsize / 2.0;
  if (y_center) g.yllcorner -= g.cellsize / 2.0;

  const std::size_t n = static_cast<std::size_t>(g.ncols) * static_cast<std::size_t>(g.nrows);
  g.values.reserve(n);
  if (!pending.empty()) {
    double v = 0.0;
    parse_double(pending, v);
    g.values.push_back(v);
  }
  while (g.values.size() < n && in >> token) {
    double v = 0.0;
    if (!parse_double(token, v)) {
      const std::size_t k = g.values.size();
      throw ValidationError(name + ": bad value '" + token + "' at file row " + std::to_string(k / g.ncols) +
                            ", col " + std::to_string(k % g.ncols));
    }
    g.values.push_back(v);
  }
  if (g.values.size() != n)
    throw ValidationError(name + ": expected " + std::to_string(n) + " values, found " + std::to_string(g.values.size()));
  if (in >> token) throw ValidationError(name + ": trailing data after " + std::to_string(n) + " values");
  return g;
}

void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& g, int precision) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write raster " + path.string());
  out.setf(std::ios::fixed);
  out.precision(6);
  out << "ncols " << g.ncols << "\nnrows " << g.nrows << "\nxllcorner " << g.xllcorner << "\nyllcorner "
      << g.yllcorner << "\ncellsize " << g.cellsize << "\n";
  if (g.nodata) out << "NODATA_value " << *g.nodata << "\n";
  out.precision(precision);
  for (int r = 0; r < g.nrows; ++r) {
    for (int c = 0; c < g.ncols; ++c) {
      const double v = g.at_file(r, c);
      if (c) out << ' ';
      if (g.is_nodata(v)) out << static_cast<long long>(v);
      else out << v;
    }
    out << '\n';
  }
  if (!out) throw ValidationError("write failed: " + path.string());
}

}  // namespace pirogue
