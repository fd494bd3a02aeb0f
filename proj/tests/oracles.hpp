// Brute-force reference computations shared by the unit tests and the
// acceptance binary. Each one is written independently of the library code
// it checks: plain loops, no summed-area tables, no level-set sweeps.
#ifndef CUBEMAX_TESTS_ORACLES_HPP
#define CUBEMAX_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cubemax/cube.hpp"
#include "cubemax/grid.hpp"
#include "cubemax/rng.hpp"

namespace oracle {

using namespace cubemax;

inline int extent(const GridShape& s, int axis) { return axis < s.dim ? s.n[axis] : 1; }

/// Visits every face-adjacent pair (a, b) by an explicit coordinate scan.
template <class Fn>
void faces(const GridShape& s, Fn&& fn) {
  for (Index i = 0; i < s.size(); ++i) {
    const Coord c = s.coord(i);
    for (int axis = 0; axis < s.dim; ++axis) {
      Coord d = c;
      if (++d[axis] >= s.n[axis]) continue;
      fn(i, s.index(d));
    }
  }
}

inline double gradient_variation(const GridFunction& f, const PixelSet* mask = nullptr) {
  double sum = 0.0;
  faces(f.shape(), [&](Index a, Index b) {
    if (mask && !((*mask)[a] && (*mask)[b])) return;
    sum += std::abs(f[a] - f[b]);
  });
  return sum * std::pow(f.h(), f.dim() - 1);
}

inline Index perimeter_faces(const PixelSet& E, const PixelSet* mask = nullptr) {
  Index n = 0;
  faces(E.shape(), [&](Index a, Index b) {
    if (mask && !((*mask)[a] && (*mask)[b])) return;
    if (E[a] != E[b]) ++n;
  });
  return n;
}

/// Sum over the cells of q by direct iteration.
inline double cube_sum(const GridFunction& f, const GridCube& q) {
  const GridShape& s = f.shape();
  double sum = 0.0;
  for (int i = 0; i < (s.dim > 0 ? q.side : 1); ++i)
    for (int j = 0; j < (s.dim > 1 ? q.side : 1); ++j)
      for (int k = 0; k < (s.dim > 2 ? q.side : 1); ++k)
        sum += f.at({q.anchor[0] + i, q.anchor[1] + j, q.anchor[2] + k});
  return sum;
}

inline double cube_avg(const GridFunction& f, const GridCube& q) {
  return cube_sum(f, q) / double(cube_cell_count(f.dim(), q.side));
}

inline Index cube_count(const PixelSet& E, const GridCube& q) {
  Index n = 0;
  const GridShape& s = E.shape();
  for (Index i = 0; i < s.size(); ++i)
    if (E[i] && contains_cell(s.dim, q, s.coord(i))) ++n;
  return n;
}

/// Every cube of the grid, all sides and anchors.
inline std::vector<GridCube> every_cube(const GridShape& s) {
  std::vector<GridCube> out;
  for (int side = 1; side <= s.min_extent(); ++side)
    for (int a = 0; a + (s.dim > 0 ? side : 1) <= extent(s, 0); ++a)
      for (int b = 0; b + (s.dim > 1 ? side : 1) <= extent(s, 1); ++b)
        for (int c = 0; c + (s.dim > 2 ? side : 1) <= extent(s, 2); ++c)
          out.push_back(GridCube{{a, b, c}, side});
  return out;
}

/// max(f(x), f_Q over every cube Q containing x), averages by direct sums.
inline std::vector<double> maximal_brute(const GridFunction& f, const std::vector<GridCube>& cubes) {
  const GridShape& s = f.shape();
  std::vector<double> out(f.values().data(), f.values().data() + f.size());
  for (const auto& q : cubes) {
    const double avg = cube_avg(f, q);
    for (Index i = 0; i < s.size(); ++i)
      if (contains_cell(s.dim, q, s.coord(i))) out[std::size_t(i)] = std::max(out[std::size_t(i)], avg);
  }
  return out;
}

/// Grid function with small integer values so that every cube sum is exact.
inline GridFunction integer_grid(const GridShape& s, double h, int lo, int hi, Rng& rng) {
  std::vector<double> v(std::size_t(s.size()));
  for (auto& x : v) x = rng.uniform_int(lo, hi);
  return GridFunction(s, h, v);
}

inline GridShape random_shape(int dim, int max_extent, Rng& rng) {
  if (dim == 1) return GridShape{rng.uniform_int(2, max_extent)};
  if (dim == 2) return GridShape{rng.uniform_int(2, max_extent), rng.uniform_int(2, max_extent)};
  return GridShape{rng.uniform_int(2, max_extent), rng.uniform_int(2, max_extent), rng.uniform_int(2, max_extent)};
}

/// All dyadic subintervals of [0, n), n a power of two.
inline std::vector<GridCube> dyadic_intervals(int n) {
  std::vector<GridCube> out;
  for (int s = n; s >= 1; s /= 2)
    for (int a = 0; a < n; a += s) out.push_back(GridCube{{a, 0, 0}, s});
  return out;
}

/// Dyadic subcubes of q0 (side a power of two), by nested loops.
inline std::vector<GridCube> dyadic_subcubes(const GridCube& q0, int dim) {
  std::vector<GridCube> out;
  for (int s = q0.side; s >= 1; s /= 2) {
    const int k = q0.side / s;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < (dim > 1 ? k : 1); ++j)
        for (int l = 0; l < (dim > 2 ? k : 1); ++l)
          out.push_back(GridCube{{q0.anchor[0] + i * s, dim > 1 ? q0.anchor[1] + j * s : 0,
                                  dim > 2 ? q0.anchor[2] + l * s : 0},
                                 s});
  }
  return out;
}

/// 2^(d+1) times the integral over lam > f_q0 of the volume of {f >= lam}
/// inside the union of dyadic subcubes Q with f_Q >= lam and E-density
/// below 1/2. The integrand is constant between consecutive candidate
/// values, so it is sampled at interval midpoints.
inline double sparse_mass_rhs(const GridFunction& f, const GridCube& q0) {
  const int dim = f.dim();
  const auto dy = dyadic_subcubes(q0, dim);
  const double fq0 = cube_avg(f, q0);
  std::vector<double> cuts{fq0};
  for (Index i = 0; i < f.size(); ++i)
    if (contains_cell(dim, q0, f.shape().coord(i)) && f[i] > fq0) cuts.push_back(f[i]);
  for (const auto& q : dy)
    if (cube_avg(f, q) > fq0) cuts.push_back(cube_avg(f, q));
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (!(cuts[i] > cuts[i - 1])) continue;
    const double lam = 0.5 * (cuts[i] + cuts[i - 1]);
    std::vector<bool> in_u(std::size_t(f.size()), false);
    for (const auto& q : dy) {
      if (cube_avg(f, q) < lam) continue;
      Index above = 0;
      for (Index c = 0; c < f.size(); ++c)
        if (contains_cell(dim, q, f.shape().coord(c)) && f[c] >= lam) ++above;
      if (2 * above >= cube_cell_count(dim, q.side)) continue;
      for (Index c = 0; c < f.size(); ++c)
        if (contains_cell(dim, q, f.shape().coord(c))) in_u[std::size_t(c)] = true;
    }
    Index n = 0;
    for (Index c = 0; c < f.size(); ++c) n += in_u[std::size_t(c)] && f[c] >= lam;
    total += (cuts[i] - cuts[i - 1]) * double(n) * f.cell_measure();
  }
  return std::ldexp(total, dim + 1);
}

}  // namespace oracle

#endif  // CUBEMAX_TESTS_ORACLES_HPP
