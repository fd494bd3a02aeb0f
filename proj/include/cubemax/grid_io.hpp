#ifndef CUBEMAX_GRID_IO_HPP
#define CUBEMAX_GRID_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cubemax/grid.hpp"

namespace cubemax {

// CSV: one row per grid line, d = 1 or 2. The cell width is not stored.
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_csv(std::istream& is, double h = 1.0);

// Binary: "CUBEMAX1", u32 d, u32 dims[d], f64 h, f64 values[], little-endian.
void write_binary(std::ostream& os, const GridFunction& f);
GridFunction read_binary(std::istream& is);

void save_grid(const std::filesystem::path& path, const GridFunction& f);
GridFunction load_grid(const std::filesystem::path& path, double csv_h = 1.0);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace cubemax

#endif  // CUBEMAX_GRID_IO_HPP
