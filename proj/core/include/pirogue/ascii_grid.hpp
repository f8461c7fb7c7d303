#pragma once

#include <filesystem>
#include <optional>
#include <vector>

namespace pirogue {

/**
 * ESRI ASCII grid ("AAIGrid") raster.
 *
 * Header keys: ncols, nrows, xllcorner|xllcenter, yllcorner|yllcenter,
 * cellsize, optional NODATA_value; then nrows lines of ncols values, the
 * first line being the northernmost row. `values` keeps the file order.
 */
struct AsciiGrid {
  int ncols = 0;
  int nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 0.0;
  std::optional<double> nodata;
  std::vector<double> values;

  double at_file(int file_row, int col) const { return values[static_cast<std::size_t>(file_row) * ncols + col]; }
  bool is_nodata(double v) const;
  bool same_shape(const AsciiGrid& other) const;
};

/// Throws ValidationError naming the file (and line) on malformed input.
AsciiGrid read_ascii_grid(const std::filesystem::path& path);
void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid, int precision = 3);

}  // namespace pirogue
