#include "cubemax/generators.hpp"

#include <algorithm>
#include <cmath>

namespace cubemax {

FunctionClass parse_function_class(const std::string& s) {
  if (s == "indicator") return FunctionClass::indicator;
  if (s == "simple") return FunctionClass::simple;
  if (s == "block-decreasing") return FunctionClass::block_decreasing;
  if (s == "radial") return FunctionClass::radial;
  if (s == "random-smooth") return FunctionClass::random_smooth;
  if (s == "checkerboard") return FunctionClass::checkerboard;
  if (s == "dumbbell") return FunctionClass::dumbbell;
  throw Error(Errc::config_error, "unknown function class: " + s);
}

FamilyClass parse_family_class(const std::string& s) {
  if (s == "all-cubes") return FamilyClass::all_cubes;
  if (s == "dyadic") return FamilyClass::dyadic;
  if (s == "random-complete") return FamilyClass::random_complete;
  throw Error(Errc::config_error, "unknown family class: " + s);
}

std::string to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::indicator: return "indicator";
    case FunctionClass::simple: return "simple";
    case FunctionClass::block_decreasing: return "block-decreasing";
    case FunctionClass::radial: return "radial";
    case FunctionClass::random_smooth: return "random-smooth";
    case FunctionClass::checkerboard: return "checkerboard";
    case FunctionClass::dumbbell: return "dumbbell";
  }
  return "?";
}

std::string to_string(FamilyClass c) {
  switch (c) {
    case FamilyClass::all_cubes: return "all-cubes";
    case FamilyClass::dyadic: return "dyadic";
    case FamilyClass::random_complete: return "random-complete";
  }
  return "?";
}

namespace {

struct Box {
  Coord lo{0, 0, 0}, hi{1, 1, 1};
};

Box random_box(const GridShape& shape, Rng& rng) {
  Box b;
  for (int a = 0; a < shape.dim; ++a) {
    int x = rng.uniform_int(0, shape.n[a] - 1), y = rng.uniform_int(0, shape.n[a] - 1);
    if (x > y) std::swap(x, y);
    b.lo[a] = x;
    b.hi[a] = y + 1;
  }
  return b;
}

template <class Fn>
void for_each_cell(const GridShape& shape, Fn&& fn) {
  for (int i0 = 0; i0 < shape.n[0]; ++i0)
    for (int i1 = 0; i1 < shape.n[1]; ++i1)
      for (int i2 = 0; i2 < shape.n[2]; ++i2) {
        const Coord c{i0, i1, i2};
        fn(shape.index(c), c);
      }
}

void add_box(Eigen::ArrayXd& v, const GridShape& shape, const Box& b, double w) {
  for_each_cell(shape, [&](Index i, const Coord& c) {
    for (int a = 0; a < 3; ++a)
      if (c[a] < b.lo[a] || c[a] >= b.hi[a]) return;
    v[i] += w;
  });
}

bool is_constant(const Eigen::ArrayXd& v) { return v.size() == 0 || v.maxCoeff() == v.minCoeff(); }

// Cell center in length units.
std::array<double, 3> center(const Coord& c, double h) {
  return {(c[0] + 0.5) * h, (c[1] + 0.5) * h, (c[2] + 0.5) * h};
}

}  // namespace

GridFunction random_indicator(const GridShape& shape, double h, Rng& rng) {
  Eigen::ArrayXd v;
  do {
    v = Eigen::ArrayXd::Zero(shape.size());
    const int k = rng.uniform_int(1, 4);
    for (int j = 0; j < k; ++j) add_box(v, shape, random_box(shape, rng), 1.0);
    v = (v > 0).cast<double>();
  } while (is_constant(v));
  return GridFunction(shape, h, v);
}

PixelSet random_pixels(const GridShape& shape, double p, Rng& rng) {
  PixelSet E(shape);
  for (Index i = 0; i < shape.size(); ++i)
    if (rng.coin(p)) E.set(i);
  return E;
}

GridFunction random_simple(const GridShape& shape, double h, Rng& rng) {
  Eigen::ArrayXd v;
  do {
    v = Eigen::ArrayXd::Zero(shape.size());
    const int k = rng.uniform_int(2, 5);
    for (int j = 0; j < k; ++j) add_box(v, shape, random_box(shape, rng), rng.uniform_int(1, 4));
  } while (is_constant(v));
  return GridFunction(shape, h, v);
}

GridFunction random_block_decreasing(const GridShape& shape, double h, Rng& rng) {
  Eigen::ArrayXd v;
  do {
    v = Eigen::ArrayXd::Zero(shape.size());
    Coord mid{0, 0, 0};
    for (int a = 0; a < shape.dim; ++a) mid[a] = rng.uniform_int(0, shape.n[a] - 1);
    const int k = rng.uniform_int(1, 4);
    for (int j = 0; j < k; ++j) {
      Box b;
      for (int a = 0; a < shape.dim; ++a) {
        b.lo[a] = std::max(0, mid[a] - rng.uniform_int(0, shape.n[a] / 2));
        b.hi[a] = std::min(shape.n[a], mid[a] + 1 + rng.uniform_int(0, shape.n[a] / 2));
      }
      add_box(v, shape, b, rng.uniform_int(1, 3));
    }
  } while (is_constant(v));
  return GridFunction(shape, h, v);
}

GridFunction random_radial(const GridShape& shape, double h, Rng& rng) {
  Eigen::ArrayXd v(shape.size());
  std::array<double, 3> c{0, 0, 0};
  for (int a = 0; a < shape.dim; ++a) c[a] = rng.uniform(0, shape.n[a] * h);
  const double R = rng.uniform(0.2, 0.6) * shape.min_extent() * h;
  const bool cone = rng.coin();
  for_each_cell(shape, [&](Index i, const Coord& x) {
    const auto p = center(x, h);
    double r2 = 0.0;
    for (int a = 0; a < shape.dim; ++a) r2 += (p[a] - c[a]) * (p[a] - c[a]);
    const double r = std::sqrt(r2);
    v[i] = cone ? std::max(0.0, 1.0 - r / R) : (r < R ? 1.0 : 0.0);
  });
  if (is_constant(v)) v[0] += 1.0;
  return GridFunction(shape, h, v);
}

GridFunction random_smooth(const GridShape& shape, double h, Rng& rng) {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(shape.size());
  const int k = rng.uniform_int(1, 4);
  for (int j = 0; j < k; ++j) {
    std::array<double, 3> c{0, 0, 0};
    for (int a = 0; a < shape.dim; ++a) c[a] = rng.uniform(0, shape.n[a] * h);
    const double s = rng.uniform(0.05, 0.3) * shape.min_extent() * h;
    const double w = rng.uniform(0.5, 2.0);
    for_each_cell(shape, [&](Index i, const Coord& x) {
      const auto p = center(x, h);
      double r2 = 0.0;
      for (int a = 0; a < shape.dim; ++a) r2 += (p[a] - c[a]) * (p[a] - c[a]);
      v[i] += w * std::exp(-r2 / (2 * s * s));
    });
  }
  return GridFunction(shape, h, v);
}

GridFunction random_steps(int n, double h, Rng& rng) {
  std::vector<double> v(std::size_t(n), 0.0);
  do {
    double level = rng.uniform_int(0, 4);
    for (int i = 0; i < n; ++i) {
      if (rng.coin(0.3)) level = rng.uniform_int(0, 4);
      v[std::size_t(i)] = level;
    }
  } while (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; }));
  return GridFunction(GridShape{n}, h, v);
}

GridFunction generate_function(FunctionClass c, const GridShape& shape, double h, Rng& rng) {
  switch (c) {
    case FunctionClass::indicator: return random_indicator(shape, h, rng);
    case FunctionClass::simple: return random_simple(shape, h, rng);
    case FunctionClass::block_decreasing: return random_block_decreasing(shape, h, rng);
    case FunctionClass::radial: return random_radial(shape, h, rng);
    case FunctionClass::random_smooth: return random_smooth(shape, h, rng);
    default: break;
  }
  throw Error(Errc::config_error, "function class " + to_string(c) + " is a fixed example, not a random class");
}

std::vector<GridCube> random_power_cubes(const GridShape& shape, int count, int max_side, Rng& rng) {
  int limit = 1;
  while (limit * 2 <= std::min(max_side, shape.min_extent())) limit *= 2;
  int levels = 0;
  while ((1 << (levels + 1)) <= limit) ++levels;
  std::vector<GridCube> out;
  for (int k = 0; k < count; ++k) {
    GridCube q;
    q.side = 1 << rng.uniform_int(0, levels);
    for (int a = 0; a < shape.dim; ++a) q.anchor[a] = rng.uniform_int(0, shape.n[a] - q.side);
    out.push_back(q);
  }
  return out;
}

CubeFamily dyadic_family(const GridShape& shape, double h) {
  int side = 1;
  while (side * 2 <= shape.min_extent()) side *= 2;
  return dyadic_descendants(shape, h, GridCube{{0, 0, 0}, side});
}

CubeFamily generate_family(FamilyClass c, const GridShape& shape, double h, Rng& rng, int seed_cubes) {
  switch (c) {
    case FamilyClass::all_cubes: return all_cubes(shape, h);
    case FamilyClass::dyadic: return dyadic_family(shape, h);
    case FamilyClass::random_complete:
      return dyadic_completion(CubeFamily(shape, h, random_power_cubes(shape, seed_cubes, shape.min_extent(), rng)));
  }
  throw Error(Errc::config_error, "unknown family class");
}

GridFunction checkerboard_function(int N_max) {
  const int n = 2 << N_max;
  const GridShape shape{n, n};
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(shape.size());
  for (int i = 0; i < n / 2; ++i)
    for (int j = 0; j < n / 2; ++j) v[shape.index({i, j, 0})] = 1.0;
  return GridFunction(shape, std::ldexp(1.0, -N_max), v);
}

CubeFamily checkerboard_family(int N_max, int N) {
  if (N < 0 || N > N_max) throw Error(Errc::invalid_argument, "need 0 <= N <= N_max");
  const int n = 2 << N_max;
  const GridShape shape{n, n};
  std::vector<GridCube> cubes{GridCube{{0, 0, 0}, n}};
  const int s = 1 << (N_max - N);
  for (int a = 0; a < (1 << N); ++a)
    for (int b = 0; b < (1 << N); ++b)
      if ((a + b) % 2 == 0) cubes.push_back(GridCube{{a * s, b * s, 0}, s});
  return CubeFamily(shape, std::ldexp(1.0, -N_max), cubes);
}

namespace {

constexpr double kX0 = -5.0, kY0 = -10.0;

GridShape dumbbell_shape(double h) {
  const double n1 = 10.0 / h, n2 = 12.0 / h;
  if (n1 != std::floor(n1) || n2 != std::floor(n2) || 1.0 / h != std::floor(1.0 / h))
    throw Error(Errc::invalid_argument, "h must divide the unit length");
  return GridShape{int(n1), int(n2)};
}

}  // namespace

PixelSet dumbbell_domain(double h) {
  const GridShape shape = dumbbell_shape(h);
  PixelSet omega(shape);
  for (int i = 0; i < shape.n[0]; ++i)
    for (int j = 0; j < shape.n[1]; ++j) {
      const double x = kX0 + i * h, y = kY0 + j * h;  // lower-left corner
      if (y < 0.0 || (x >= -1.0 && x + h <= 1.0)) omega.set({i, j, 0});
    }
  return omega;
}

GridFunction dumbbell_function(double h) {
  const GridShape shape = dumbbell_shape(h);
  const PixelSet omega = dumbbell_domain(h);
  // d^2 F / dx dy = max(0, -14 - x - y).
  auto F = [](double x, double y) {
    const double t = std::max(0.0, -14.0 - x - y);
    return t * t * t / 6.0;
  };
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(shape.size());
  for (int i = 0; i < shape.n[0]; ++i)
    for (int j = 0; j < shape.n[1]; ++j) {
      const Index k = shape.index({i, j, 0});
      if (!omega[k]) continue;
      const double x0 = kX0 + i * h, x1 = x0 + h, y0 = kY0 + j * h, y1 = y0 + h;
      v[k] = std::max(0.0, F(x1, y1) - F(x0, y1) - F(x1, y0) + F(x0, y0)) / (h * h);
    }
  return GridFunction(shape, h, v);
}

}  // namespace cubemax
