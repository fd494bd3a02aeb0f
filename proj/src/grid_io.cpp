#include "cubemax/grid_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cubemax {

namespace {

constexpr char kMagic[8] = {'C', 'U', 'B', 'E', 'M', 'A', 'X', '1'};

static_assert(std::endian::native == std::endian::little, "binary grid I/O assumes little-endian");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw Error(Errc::io_error, "truncated binary grid");
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const GridFunction& f) {
  if (f.dim() > 2) throw Error(Errc::unsupported_dimension, "CSV grids are limited to d <= 2");
  const int rows = f.dim() == 1 ? 1 : f.shape().n[0];
  const int cols = f.dim() == 1 ? f.shape().n[0] : f.shape().n[1];
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) os << ',';
      os << format_double(f[Index(r) * cols + c]);
    }
    os << '\n';
  }
}

GridFunction read_csv(std::istream& is, double h) {
  std::vector<double> values;
  int rows = 0;
  int cols = -1;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    int count = 0;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw Error(Errc::io_error, "bad CSV value '" + cell + "'");
      values.push_back(v);
      ++count;
    }
    if (cols >= 0 && count != cols) throw Error(Errc::io_error, "ragged CSV rows");
    cols = count;
    ++rows;
  }
  if (rows == 0) throw Error(Errc::io_error, "empty CSV grid");
  const GridShape shape = rows == 1 ? GridShape{cols} : GridShape{rows, cols};
  return GridFunction(shape, h, values);
}

void write_binary(std::ostream& os, const GridFunction& f) {
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.dim()));
  for (int a = 0; a < f.dim(); ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(f.shape().n[a]));
  put<double>(os, f.h());
  for (Index i = 0; i < f.size(); ++i) put<double>(os, f[i]);
}

GridFunction read_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error(Errc::io_error, "missing CUBEMAX1 magic");
  const auto d = get<std::uint32_t>(is);
  if (d < 1 || d > 3) throw Error(Errc::io_error, "bad dimension in binary grid");
  std::vector<int> dims(d);
  for (auto& n : dims) n = static_cast<int>(get<std::uint32_t>(is));
  const double h = get<double>(is);
  GridShape shape(dims);
  Eigen::ArrayXd values(shape.size());
  for (Index i = 0; i < shape.size(); ++i) values[i] = get<double>(is);
  // NaN cells are the masked-domain sentinel written for local maximal functions.
  return GridFunction::with_sentinels(shape, h, std::move(values));
}

void save_grid(const std::filesystem::path& path, const GridFunction& f) {
  const bool csv = path.extension() == ".csv";
  std::ofstream os(path, csv ? std::ios::out : std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot open " + path.string());
  if (csv)
    write_csv(os, f);
  else
    write_binary(os, f);
}

GridFunction load_grid(const std::filesystem::path& path, double csv_h) {
  const bool csv = path.extension() == ".csv";
  std::ifstream is(path, csv ? std::ios::in : std::ios::binary);
  if (!is) throw Error(Errc::io_error, "cannot open " + path.string());
  return csv ? read_csv(is, csv_h) : read_binary(is);
}

}  // namespace cubemax
